// Page wiring. Everything interesting lives in app.ts / render.ts; this
// file just connects DOM nodes to the controller.

import { ApiClient } from './api.js'
import { ExplorerApp, type ViewSink } from './app.js'
import type { TimeWindow } from './types.js'

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id)
  if (!el) throw new Error(`missing #${id}`)
  return el as T
}

const queryInput = $<HTMLInputElement>('query')
const searchButton = $<HTMLButtonElement>('go')
const fromSlider = $<HTMLInputElement>('from')
const toSlider = $<HTMLInputElement>('to')
const windowLabel = $<HTMLElement>('window-label')
const mappingEl = $<HTMLElement>('mapping')
const resultsEl = $<HTMLElement>('results')
const histogramEl = $<HTMLElement>('histogram')
const statusEl = $<HTMLElement>('status')

let months: readonly string[] = []

const sink: ViewSink = {
  mapping: (html) => {
    mappingEl.innerHTML = html
  },
  results: (html) => {
    resultsEl.innerHTML = html
  },
  histogram: (html) => {
    histogramEl.innerHTML = html
  },
  status: (html) => {
    statusEl.innerHTML = html
  },
  window: (win: TimeWindow, range) => {
    months = range
    const max = Math.max(0, months.length - 1)
    fromSlider.max = String(max)
    toSlider.max = String(max)
    fromSlider.value = String(Math.max(0, months.indexOf(win.from)))
    toSlider.value = String(Math.max(0, months.indexOf(win.to)))
    windowLabel.textContent = `${win.from} – ${win.to}`
  },
}

const app = new ExplorerApp(new ApiClient(''), sink)

function submit(): void {
  const query = queryInput.value.trim()
  if (query) void app.runSearch(query)
}

searchButton.addEventListener('click', submit)
queryInput.addEventListener('keydown', (event) => {
  if (event.key === 'Enter') submit()
})

function slid(): void {
  const from = months[Number(fromSlider.value)]
  const to = months[Number(toSlider.value)]
  if (from && to) void app.setWindow(from, to)
}

fromSlider.addEventListener('change', slid)
toSlider.addEventListener('change', slid)

mappingEl.addEventListener('click', (event) => {
  const target = event.target as HTMLElement
  const tag = target.closest('.toggle')?.getAttribute('data-tag')
  if (tag) void app.toggle(tag)
})

statusEl.addEventListener('click', (event) => {
  if ((event.target as HTMLElement).classList.contains('retry')) void app.retry()
})

void app.init()
