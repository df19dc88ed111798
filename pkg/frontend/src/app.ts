// Controller. Owns the UI state and talks to the API client; completely
// DOM-free so the tests can drive it with a fake sink. Every rendered
// number passes through untouched -- no scoring happens on this side.

import { ApiClient, ApiError } from './api.js'
import { monthRange } from './months.js'
import {
  renderHistogram,
  renderMappingPanel,
  renderResults,
  renderStatus,
} from './render.js'
import type { MappingPayload, TimeWindow } from './types.js'

/** Where rendered HTML goes. The page wires these to innerHTML. */
export interface ViewSink {
  mapping(html: string): void
  results(html: string): void
  histogram(html: string): void
  status(html: string): void
  window(win: TimeWindow, months: readonly string[]): void
}

export class ExplorerApp {
  readonly api: ApiClient
  private readonly sink: ViewSink

  months: readonly string[] = []
  window: TimeWindow = { from: '', to: '' }
  mapping: MappingPayload | null = null
  toggled = new Set<string>()

  private generation = 0
  private lastAction: (() => Promise<void>) | null = null

  constructor(api: ApiClient, sink: ViewSink) {
    this.api = api
    this.sink = sink
  }

  /** Fetch corpus bounds and seed the window slider to the full range. */
  async init(): Promise<void> {
    const gen = ++this.generation
    try {
      const stats = await this.api.stats()
      if (gen !== this.generation) return
      if (!stats.monthBounds) {
        this.sink.status(renderStatus('error', 'the corpus has no indexed months'))
        return
      }
      const [first, last] = stats.monthBounds
      this.months = monthRange(first, last)
      this.window = { from: first, to: last }
      this.sink.window(this.window, this.months)
      this.sink.status(renderStatus('info', 'type a query to begin'))
    } catch (err) {
      this.fail(gen, err, () => this.init())
    }
  }

  /** Map the query to tags, select every accepted one, then search. */
  async runSearch(query: string): Promise<void> {
    const gen = ++this.generation
    this.lastAction = () => this.runSearch(query)
    try {
      const mapping = await this.api.map(query)
      if (gen !== this.generation) return
      this.mapping = mapping
      this.toggled = new Set(mapping.tags)
      this.sink.mapping(renderMappingPanel(mapping, this.toggled))
      await this.refresh(gen)
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        if (gen !== this.generation) return
        this.mapping = null
        this.toggled = new Set()
        this.sink.mapping('')
        this.sink.results('')
        this.sink.histogram('')
        this.sink.status(renderStatus('error', `no mapping for "${query}"`))
        return
      }
      this.fail(gen, err, () => this.runSearch(query))
    }
  }

  /** Flip one accepted tag in or out of the active set and re-query. */
  async toggle(tag: string): Promise<void> {
    if (!this.mapping || !this.mapping.tags.includes(tag)) return
    if (this.toggled.has(tag)) this.toggled.delete(tag)
    else this.toggled.add(tag)
    this.sink.mapping(renderMappingPanel(this.mapping, this.toggled))
    const gen = ++this.generation
    this.lastAction = () => this.refresh(++this.generation)
    await this.refresh(gen)
  }

  /** Move the window (kept ordered) and re-query under the same tags. */
  async setWindow(from: string, to: string): Promise<void> {
    this.window = from <= to ? { from, to } : { from: to, to: from }
    this.sink.window(this.window, this.months)
    if (!this.mapping) return
    const gen = ++this.generation
    this.lastAction = () => this.refresh(++this.generation)
    await this.refresh(gen)
  }

  /** Re-run whatever failed last. */
  async retry(): Promise<void> {
    if (this.lastAction) await this.lastAction()
  }

  private async refresh(gen: number): Promise<void> {
    if (this.toggled.size === 0) {
      this.sink.results(renderStatus('info', 'every tag is toggled off'))
      this.sink.histogram('')
      this.sink.status('')
      return
    }
    const tags = [...this.toggled].sort()
    try {
      const [search, histogram] = await Promise.all([
        this.api.searchTags(tags, this.window),
        this.api.histogram(tags, this.window),
      ])
      if (gen !== this.generation) return
      this.sink.results(renderResults(search))
      this.sink.histogram(renderHistogram(histogram))
      this.sink.status('')
    } catch (err) {
      this.fail(gen, err, () => this.refresh(++this.generation))
    }
  }

  private fail(gen: number, err: unknown, again: () => Promise<void>): void {
    if (gen !== this.generation) return
    this.lastAction = again
    const detail = err instanceof Error ? err.message : String(err)
    this.sink.status(renderStatus('retry', `request failed: ${detail}`))
  }
}
