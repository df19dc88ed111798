// Month labels for the window slider. "YYYY-MM" strings sort
// chronologically, so ranges are plain lexicographic comparisons.

export function monthRange(first: string, last: string): string[] {
  const months: string[] = []
  let [year, month] = first.split('-').map(Number) as [number, number]
  for (;;) {
    const label = `${String(year).padStart(4, '0')}-${String(month).padStart(2, '0')}`
    months.push(label)
    if (label === last || months.length > 1200) break
    month += 1
    if (month === 13) {
      year += 1
      month = 1
    }
  }
  return months
}
