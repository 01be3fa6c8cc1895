/** Pure pagination arithmetic shared by the widget and its tests. */

export function numPages(totalResults: number, perPage: number): number {
  if (perPage < 1) throw new RangeError("perPage must be positive");
  return Math.ceil(Math.max(0, totalResults) / perPage);
}

/** 0-based index of the final page; 0 when there are no results. */
export function lastPage(totalResults: number, perPage: number): number {
  return Math.max(0, numPages(totalResults, perPage) - 1);
}

/**
 * Numbered page window around the current page, e.g. current=7 of 40
 * with width 5 -> [5, 6, 7, 8, 9]. Always within [0, pages).
 */
export function pageWindow(
  current: number,
  pages: number,
  width = 5,
): number[] {
  if (pages <= 0) return [];
  let start = Math.max(0, current - Math.floor(width / 2));
  const end = Math.min(pages, start + width);
  start = Math.max(0, end - width);
  const out: number[] = [];
  for (let p = start; p < end; p++) out.push(p);
  return out;
}
