import { describe, expect, it } from "vitest";

import { parseConfig } from "../src/config.js";

const RAW = {
  title: "Demo Search",
  text_field: "text",
  metadata_field: "docid",
  service_url: "http://127.0.0.1:7860",
  results_per_page: "20",
};

describe("parseConfig", () => {
  it("accepts the scaffold's config.json shape", () => {
    const config = parseConfig(RAW);
    expect(config.title).toBe("Demo Search");
    expect(config.serviceUrl).toBe("http://127.0.0.1:7860");
    expect(config.resultsPerPage).toBe(20);
  });

  it("defaults results_per_page to 20", () => {
    const { results_per_page, ...rest } = RAW;
    expect(parseConfig(rest).resultsPerPage).toBe(20);
  });

  it("strips trailing slashes from the service URL", () => {
    expect(
      parseConfig({ ...RAW, service_url: "http://svc/" }).serviceUrl,
    ).toBe("http://svc");
  });

  it("rejects empty required fields", () => {
    expect(() => parseConfig({ ...RAW, title: "" })).toThrow(/title/);
    expect(() => parseConfig({ ...RAW, service_url: undefined })).toThrow(
      /service_url/,
    );
  });

  it("rejects a non-integer page size", () => {
    expect(() =>
      parseConfig({ ...RAW, results_per_page: "lots" }),
    ).toThrow(/results_per_page/);
  });
});
