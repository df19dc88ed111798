import type {
  HistogramPayload,
  MappingPayload,
  SearchPayload,
  StatsPayload,
  TimeWindow,
} from './types.js'

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message)
  }
}

type FetchLike = typeof globalThis.fetch

/** Thin typed client over the four read-only endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = globalThis.fetch.bind(globalThis),
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const search = new URLSearchParams(params).toString()
    const url = `${this.baseUrl}${path}${search ? `?${search}` : ''}`
    const response = await this.fetchImpl(url)
    const body = await response.json()
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? `request failed (${response.status})`)
    }
    return body as T
  }

  stats(): Promise<StatsPayload> {
    return this.get('/api/stats', {})
  }

  map(query: string): Promise<MappingPayload> {
    return this.get('/api/map', { q: query })
  }

  searchTags(tags: Iterable<string>, window: TimeWindow): Promise<SearchPayload> {
    return this.get('/api/search', {
      tags: [...tags].join(','),
      from: window.from,
      to: window.to,
    })
  }

  histogram(tags: Iterable<string>, window: TimeWindow): Promise<HistogramPayload> {
    return this.get('/api/histogram', {
      tags: [...tags].join(','),
      from: window.from,
      to: window.to,
    })
  }
}
