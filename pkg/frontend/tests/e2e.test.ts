// End-to-end: the real controller against the real HTTP service, which
// is spawned as a child process serving the bundled example corpus.

import { spawn, type ChildProcessWithoutNullStreams } from 'node:child_process'
import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { ApiClient } from '../src/api.js'
import { ExplorerApp } from '../src/app.js'
import { RecordingSink, renderedUrls } from './support.js'

const SERVICE_SCRIPT = `
import tempfile

from temposearch.corpus import load_corpus, load_seed_file
from temposearch.fixtures import write_fixture_tree
from temposearch.index import build_index
from temposearch.mapping import build_mapping_corpus
from temposearch.service import SearchService, make_server

with tempfile.TemporaryDirectory() as tmp:
    paths = write_fixture_tree(tmp)
    bookmarks, stats = load_corpus(paths["bookmarks"])
    index = build_index(bookmarks)
    mappings = build_mapping_corpus(index, load_seed_file(paths["seeds"])).map_all()
    server = make_server(SearchService(index, mappings, stats=stats), "127.0.0.1", 0)
    print(server.server_address[1], flush=True)
    server.serve_forever()
`

let proc: ChildProcessWithoutNullStreams
let baseUrl = ''

beforeAll(async () => {
  proc = spawn('python3', ['-c', SERVICE_SCRIPT])
  let stderr = ''
  proc.stderr.on('data', (chunk) => {
    stderr += String(chunk)
  })
  const port = await new Promise<number>((resolve, reject) => {
    let out = ''
    proc.stdout.on('data', (chunk) => {
      out += String(chunk)
      const line = out.split('\n')[0]
      if (out.includes('\n') && line) resolve(Number(line.trim()))
    })
    proc.on('exit', (code) => reject(new Error(`service exited with ${code}: ${stderr}`)))
    setTimeout(() => reject(new Error(`service did not start: ${stderr}`)), 30_000).unref()
  })
  baseUrl = `http://127.0.0.1:${port}`
}, 40_000)

afterAll(() => {
  proc?.kill()
})

function freshApp() {
  const sink = new RecordingSink()
  const app = new ExplorerApp(new ApiClient(baseUrl), sink)
  return { app, sink }
}

describe('explorer against the live service', () => {
  it('search for "american apparel" in 2006-05 renders americanapparel.net', async () => {
    const { app, sink } = freshApp()
    await app.init()
    await app.setWindow('2006-05', '2006-05')
    await app.runSearch('american apparel')
    expect(renderedUrls(sink.resultsHtml)).toEqual([
      'americanapparel.net',
      'americanapparelstore.com',
    ])
    expect(sink.resultsHtml).toContain('20 posts')
  })

  it('mapping panel shows the reference tag at score 0.500 with an accepted badge', async () => {
    const { app, sink } = freshApp()
    await app.init()
    await app.runSearch('american apparel')
    const html = sink.mappingHtml
    const refRow = html
      .split('<div class="tag-row')
      .find((part) => part.includes('data-tag="americanapparel"'))
    expect(refRow).toBeDefined()
    expect(refRow).toContain('badge ref')
    expect(refRow).toContain('badge ok')
    expect(refRow).toContain('score 0.500')
    const shopRow = html
      .split('<div class="tag-row')
      .find((part) => part.includes('data-tag="shopping"'))
    expect(shopRow).toContain('badge no')
    const line = html.indexOf('threshold-line')
    expect(line).toBeGreaterThan(html.indexOf('data-tag="apparel"'))
    expect(line).toBeLessThan(html.indexOf('data-tag="shopping"'))
    expect(line).toBeLessThan(html.indexOf('data-tag="americanapparel"'))
  })

  it('widening the window never removes result rows', async () => {
    const { app, sink } = freshApp()
    await app.init()
    await app.setWindow('2006-05', '2006-05')
    await app.runSearch('american apparel')
    let previous = new Set(renderedUrls(sink.resultsHtml))
    for (const [from, to] of [
      ['2006-03', '2006-08'],
      ['2006-01', '2006-12'],
    ] as const) {
      await app.setWindow(from, to)
      const current = new Set(renderedUrls(sink.resultsHtml))
      for (const url of previous) expect(current.has(url), `${url} lost at ${from}`).toBe(true)
      previous = current
    }
  })

  it('toggling a tag off matches querying the API with the reduced set', async () => {
    const { app, sink } = freshApp()
    await app.init()
    await app.runSearch('american apparel')
    await app.toggle('apparel')
    expect([...app.toggled].sort()).toEqual(['americanapparel', 'tshirts'])
    const direct = await app.api.searchTags(['americanapparel', 'tshirts'], app.window)
    expect(renderedUrls(sink.resultsHtml)).toEqual(direct.results.map((r) => r.url))
  })

  it('histogram reflects the server payload for the sudoku spike', async () => {
    const { app, sink } = freshApp()
    await app.init()
    await app.setWindow('2006-01', '2006-08')
    await app.runSearch('sudoku')
    await app.toggle('games')
    await app.toggle('shopping')
    expect([...app.toggled]).toEqual(['sudoku'])
    expect(sink.histogramHtml).toContain('title="2006-07: 13"')
    expect(sink.histogramHtml).toContain('title="2006-02: 3"')
    expect(sink.histogramHtml.match(/class="bar"/g)).toHaveLength(8)
  })

  it('the same interaction script renders identically twice', async () => {
    const script = async () => {
      const { app, sink } = freshApp()
      await app.init()
      await app.setWindow('2006-05', '2006-05')
      await app.runSearch('american apparel')
      await app.setWindow('2006-01', '2006-12')
      await app.toggle('apparel')
      await app.toggle('apparel')
      return sink.log
    }
    expect(await script()).toEqual(await script())
  })
})
