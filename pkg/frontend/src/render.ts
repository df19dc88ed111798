// HTML renderers. Pure string -> string, shared by the page and the
// tests. Every number shown comes verbatim from an API payload; the only
// arithmetic here is presentation (bar heights, 3-decimal formatting).

import type {
  HistogramPayload,
  MappingPayload,
  ScoredTagPayload,
  SearchPayload,
} from './types.js'

export const SCORE_THRESHOLD = 0.7

const escape = (text: string): string =>
  text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`)

const f3 = (value: number): string => value.toFixed(3)

function scoredRow(tag: ScoredTagPayload, referenceTag: string, active: boolean): string {
  const classes = ['tag-row', tag.accepted ? 'accepted' : 'rejected']
  if (!active && tag.accepted) classes.push('toggled-off')
  const badges = [
    tag.tag === referenceTag ? '<span class="badge ref">reference</span>' : '',
    tag.accepted
      ? '<span class="badge ok">accepted</span>'
      : '<span class="badge no">rejected</span>',
  ].join('')
  const toggle = tag.accepted
    ? `<button class="toggle" data-tag="${escape(tag.tag)}">${active ? 'on' : 'off'}</button>`
    : ''
  return (
    `<div class="${classes.join(' ')}" data-tag="${escape(tag.tag)}">` +
    `<span class="tag-name">${escape(tag.tag)}</span>${badges}` +
    `<span class="nums">idf ${f3(tag.idf)} · rel.idf ${f3(tag.relIdf)} · ` +
    `excl ${f3(tag.exclusiveness)} · <b>score ${f3(tag.score)}</b></span>` +
    toggle +
    '</div>'
  )
}

/**
 * Tag panel: rows sorted by score (desc, then name), with the 0.7
 * threshold drawn as a line between the scores above and below it.
 */
export function renderMappingPanel(mapping: MappingPayload, toggled: Set<string>): string {
  const rows = [...mapping.scored].sort(
    (a, b) => b.score - a.score || (a.tag < b.tag ? -1 : 1),
  )
  const parts: string[] = [
    `<h2>tags for <em>${escape(mapping.query)}</em></h2>`,
  ]
  let lineDrawn = false
  for (const row of rows) {
    if (!lineDrawn && row.score < SCORE_THRESHOLD) {
      parts.push('<div class="threshold-line">threshold 0.700</div>')
      lineDrawn = true
    }
    parts.push(scoredRow(row, mapping.referenceTag, toggled.has(row.tag)))
  }
  if (!lineDrawn) parts.push('<div class="threshold-line">threshold 0.700</div>')
  return parts.join('\n')
}

/** Result list in exactly the order the server delivered. */
export function renderResults(payload: SearchPayload): string {
  if (payload.results.length === 0) {
    return '<p class="empty">no URLs in this window</p>'
  }
  const rows = payload.results.map(
    (r) =>
      '<li class="result">' +
      `<a href="http://${escape(r.url)}">${escape(r.url)}</a>` +
      `<span class="count">${r.postCount} post${r.postCount === 1 ? '' : 's'}</span>` +
      `<span class="months">${escape(r.firstMonth)} – ${escape(r.lastMonth)}</span>` +
      `<span class="matched">${r.matchedTags.map(escape).join(', ')}</span>` +
      '</li>',
  )
  const suffix = payload.totalUrls > payload.results.length ? ` of ${payload.totalUrls}` : ''
  return (
    `<p class="total">${payload.results.length}${suffix} URL${payload.totalUrls === 1 ? '' : 's'}</p>` +
    `<ol class="results">${rows.join('')}</ol>`
  )
}

/** Zero-filled monthly bars, heights relative to the busiest month. */
export function renderHistogram(payload: HistogramPayload): string {
  const max = Math.max(1, ...payload.histogram.map((b) => b.count))
  const bars = payload.histogram.map((b) => {
    const height = Math.round((b.count / max) * 100)
    return (
      `<div class="bar" title="${escape(b.month)}: ${b.count}">` +
      `<div class="fill" style="height:${height}%"></div>` +
      `<span class="bar-label">${escape(b.month.slice(2))}</span>` +
      '</div>'
    )
  })
  return `<div class="histogram">${bars.join('')}</div>`
}

export function renderStatus(kind: 'info' | 'error' | 'retry', message: string): string {
  const retry = kind === 'retry' ? ' <button class="retry">retry</button>' : ''
  return `<div class="status ${kind}">${escape(message)}${retry}</div>`
}
