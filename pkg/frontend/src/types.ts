// Payload shapes, exactly as the HTTP API serializes them.

export interface ScoredTagPayload {
  tag: string
  idf: number
  relIdf: number
  exclusiveness: number
  score: number
  accepted: boolean
}

export interface MappingPayload {
  query: string
  referenceTag: string
  tags: string[]
  scored: ScoredTagPayload[]
}

export interface SearchResultPayload {
  url: string
  host: string
  postCount: number
  matchedTags: string[]
  firstMonth: string
  lastMonth: string
}

export interface SearchPayload {
  query: string
  from: string
  to: string
  tags: string[]
  results: SearchResultPayload[]
  totalUrls: number
}

export interface HistogramPayload {
  tags: string[]
  from: string
  to: string
  histogram: { month: string; count: number }[]
}

export interface StatsPayload {
  bookmarks: number
  uniqueUrls: number
  uniqueTags: number
  uniqueUsers: number
  rejectedLines: number
  rejectsByReason: Record<string, number>
  records: number
  monthBounds: [string, string] | null
}

export interface TimeWindow {
  from: string
  to: string
}
