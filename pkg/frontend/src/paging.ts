/** Pagination arithmetic. */

export function pageCount(total: number, pageSize: number): number {
  if (pageSize < 1) throw new Error("pageSize must be >= 1");
  return total === 0 ? 0 : Math.ceil(total / pageSize);
}

export function clampPage(page: number, total: number, pageSize: number): number {
  const pages = pageCount(total, pageSize);
  if (pages === 0) return 1;
  return Math.min(Math.max(1, page), pages);
}

export function progressPercent(pending: number, labeled: number): number {
  const total = pending + labeled;
  if (total === 0) return 100;
  return Math.round((100 * labeled) / total);
}
