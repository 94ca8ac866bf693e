import { describe, expect, it } from "vitest";

import { fmtMetric, fmtParams, fmtSizes } from "../src/format.js";

describe("fmtMetric", () => {
  it("renders four significant digits without float noise", () => {
    expect(fmtMetric(0.857415)).toBe("0.8574");
    expect(fmtMetric(200)).toBe("200");
    expect(fmtMetric(1234.5)).toBe("1235");
  });

  it("renders sentinels", () => {
    expect(fmtMetric("inf")).toBe("∞");
    expect(fmtMetric(null)).toBe("–");
  });
});

describe("fmtParams", () => {
  it("sorts parameter names", () => {
    expect(fmtParams({ linkage: "ward", k: 3 })).toBe("k=3 linkage=ward");
  });
});

describe("fmtSizes", () => {
  it("joins sizes and handles absence", () => {
    expect(fmtSizes([173, 173, 173])).toBe("173/173/173");
    expect(fmtSizes(null)).toBe("–");
  });
});
