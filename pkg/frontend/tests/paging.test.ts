import { describe, expect, it } from "vitest";

import { clampPage, pageCount, progressPercent } from "../src/paging.js";

describe("pageCount", () => {
  it("splits 25 tasks into 3 pages of 10", () => {
    expect(pageCount(25, 10)).toBe(3);
  });

  it("is 0 for an empty queue", () => {
    expect(pageCount(0, 10)).toBe(0);
  });

  it("exact multiples need no extra page", () => {
    expect(pageCount(30, 10)).toBe(3);
  });
});

describe("clampPage", () => {
  it("keeps valid pages", () => {
    expect(clampPage(2, 25, 10)).toBe(2);
  });

  it("clamps past-the-end and below-one", () => {
    expect(clampPage(9, 25, 10)).toBe(3);
    expect(clampPage(0, 25, 10)).toBe(1);
    expect(clampPage(5, 0, 10)).toBe(1);
  });
});

describe("progressPercent", () => {
  it("reports labeled share", () => {
    expect(progressPercent(3, 1)).toBe(25);
    expect(progressPercent(0, 8)).toBe(100);
    expect(progressPercent(0, 0)).toBe(100);
  });
});
