// Test doubles shared by the suites: a sink that records rendered HTML
// and a fetch stub that serves canned JSON per URL.

import type { ViewSink } from '../src/app.js'
import type { TimeWindow } from '../src/types.js'

export class RecordingSink implements ViewSink {
  mappingHtml = ''
  resultsHtml = ''
  histogramHtml = ''
  statusHtml = ''
  windowState: TimeWindow | null = null
  monthCount = 0
  log: string[] = []

  mapping(html: string): void {
    this.mappingHtml = html
    this.log.push(`mapping:${html}`)
  }

  results(html: string): void {
    this.resultsHtml = html
    this.log.push(`results:${html}`)
  }

  histogram(html: string): void {
    this.histogramHtml = html
    this.log.push(`histogram:${html}`)
  }

  status(html: string): void {
    this.statusHtml = html
    this.log.push(`status:${html}`)
  }

  window(win: TimeWindow, months: readonly string[]): void {
    this.windowState = { ...win }
    this.monthCount = months.length
    this.log.push(`window:${win.from}:${win.to}`)
  }
}

export interface CannedResponse {
  status: number
  body: unknown
}

export type RouteHandler = (url: URL) => CannedResponse | Promise<CannedResponse>

/** fetch stub: routes by pathname through `handler`, records every URL. */
export function fakeFetch(handler: RouteHandler): {
  fetch: typeof globalThis.fetch
  requests: URL[]
} {
  const requests: URL[] = []
  const fetch = (async (input: RequestInfo | URL) => {
    const url = new URL(String(input), 'http://service.test')
    requests.push(url)
    const { status, body } = await handler(url)
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    })
  }) as typeof globalThis.fetch
  return { fetch, requests }
}

/** Hosts of the rendered result links, in display order. */
export function renderedUrls(html: string): string[] {
  return [...html.matchAll(/href="http:\/\/([^"]+)"/g)].map((m) => m[1] ?? '')
}
