import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { SearchResponse } from "../src/api.js";
import { UiConfig } from "../src/config.js";
import { mountSearchPage, mountSearchWidget } from "../src/mount.js";
import { PlugsearchWidget } from "../src/widget.js";

const CONFIG: UiConfig = {
  serviceUrl: "http://svc",
  title: "Demo",
  textField: "text",
  metadataField: "docid",
  resultsPerPage: 20,
};

function makeRows(ids: string[], perRow = (id: string) => `⟦${id}⟧ text`) {
  return ids.map((id, i) => ({
    id,
    score: 1.0 - i * 0.1,
    text: `${id} text`,
    metadata: {},
    snippet: perRow(id),
  }));
}

function searchBody(
  rows: ReturnType<typeof makeRows>,
  overrides: Partial<SearchResponse> = {},
): SearchResponse {
  return {
    query: "q",
    total_results: rows.length,
    page: 0,
    per_page: 20,
    rows,
    ...overrides,
  };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  container.id = "host";
  document.body.appendChild(container);
});

afterEach(() => {
  container.remove();
  vi.unstubAllGlobals();
  window.location.hash = "";
});

function mountWidget(config = CONFIG): PlugsearchWidget {
  return mountSearchWidget("host", config);
}

describe("search rendering", () => {
  it("shows rows in response order with emphasized snippets", async () => {
    const body = searchBody(makeRows(["D2", "D1"]), { query: "a" });
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(body)));
    const widget = mountWidget();
    await widget.search("a", 0);

    const rows = widget.shadowRoot!.querySelectorAll(".row");
    expect(rows).toHaveLength(2);
    expect(rows[0].querySelector(".meta")!.textContent).toContain("D2");
    expect(rows[1].querySelector(".meta")!.textContent).toContain("D1");
    expect(rows[0].querySelector("em")!.textContent).toBe("D2");
    const url = (fetch as ReturnType<typeof vi.fn>).mock.calls[0][0] as string;
    expect(url).toContain("http://svc/search?");
    expect(url).toContain("per_page=20");
  });

  it("blank query sends nothing", async () => {
    vi.stubGlobal("fetch", vi.fn());
    const widget = mountWidget();
    await widget.search("   ", 0);
    expect(fetch).not.toHaveBeenCalled();
  });
});

describe("pagination controls", () => {
  it("Last fetches the final partial page (45 results, 20/page)", async () => {
    const page0 = searchBody(makeRows(Array.from({ length: 20 }, (_, i) => `a${i}`)), {
      total_results: 45,
    });
    const page2 = searchBody(makeRows(["b0", "b1", "b2", "b3", "b4"]), {
      total_results: 45,
      page: 2,
    });
    const mock = vi.fn(async (url: string) =>
      jsonResponse(url.includes("page=2") ? page2 : page0),
    );
    vi.stubGlobal("fetch", mock);
    const widget = mountWidget();
    await widget.search("q", 0);

    const last = [...widget.shadowRoot!.querySelectorAll("nav button")].find(
      (b) => b.textContent === "Last",
    ) as HTMLButtonElement;
    expect(last.dataset.page).toBe("2");
    last.click();
    await settle();

    expect(widget.response!.page).toBe(2);
    expect(widget.shadowRoot!.querySelectorAll(".row")).toHaveLength(5);
    const lastUrl = mock.mock.calls.at(-1)![0] as string;
    expect(lastUrl).toContain("page=2"); // never a negative page on the wire
  });

  it("hides the pager for a single page", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse(searchBody(makeRows(["only"])))),
    );
    const widget = mountWidget();
    await widget.search("q", 0);
    expect(widget.shadowRoot!.querySelectorAll("nav button")).toHaveLength(0);
  });
});

describe("degradation", () => {
  it("service error renders the detail in the banner", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse(
          { error: "empty-query", detail: "parameter q must be a non-empty query" },
          400,
        ),
      ),
    );
    const widget = mountWidget();
    await widget.search("!", 0);
    const banner = widget.shadowRoot!.querySelector(".banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("non-empty query");
  });

  it("service down shows a banner and keeps the query box usable", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        throw new TypeError("fetch failed");
      }),
    );
    const widget = mountWidget();
    await widget.search("a", 0);
    const banner = widget.shadowRoot!.querySelector(".banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("unreachable");
    const input = widget.shadowRoot!.querySelector("input") as HTMLInputElement;
    expect(input.disabled).toBe(false);
  });
});

describe("latest-wins concurrency", () => {
  it("a slow earlier response never overwrites a newer one", async () => {
    let release!: (value: Response) => void;
    const slow = new Promise<Response>((resolve) => (release = resolve));
    const fast = jsonResponse(searchBody(makeRows(["new"]), { query: "new" }));
    const mock = vi
      .fn()
      .mockImplementationOnce(() => slow)
      .mockImplementationOnce(async () => fast);
    vi.stubGlobal("fetch", mock);
    const widget = mountWidget();

    const first = widget.search("old", 0);
    const second = widget.search("new", 0);
    await second;
    release(jsonResponse(searchBody(makeRows(["old"]), { query: "old" })));
    await first;

    expect(widget.response!.rows[0].id).toBe("new");
    const meta = widget.shadowRoot!.querySelector(".meta")!;
    expect(meta.textContent).toContain("new");
  });
});

describe("embedding", () => {
  it("two widgets keep independent state", async () => {
    const other = document.createElement("div");
    other.id = "host2";
    document.body.appendChild(other);
    const mock = vi.fn(async (url: string) =>
      jsonResponse(
        searchBody(makeRows([url.includes("svc-one") ? "one" : "two"])),
      ),
    );
    vi.stubGlobal("fetch", mock);

    const w1 = mountWidget({ ...CONFIG, serviceUrl: "http://svc-one" });
    const w2 = mountSearchWidget("host2", {
      ...CONFIG,
      serviceUrl: "http://svc-two",
    });
    await w1.search("x", 0);
    expect(w1.response!.rows[0].id).toBe("one");
    expect(w2.response).toBeNull();
    expect(w2.shadowRoot!.querySelectorAll(".row")).toHaveLength(0);

    await w2.search("y", 0);
    expect(w2.response!.rows[0].id).toBe("two");
    expect(w1.response!.rows[0].id).toBe("one");
    other.remove();
  });

  it("mounting into a missing id raises a console-surfaced error", () => {
    const spy = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(() => mountSearchWidget("nope", CONFIG)).toThrow(/nope/);
    expect(spy).toHaveBeenCalled();
    spy.mockRestore();
  });
});

describe("URL-fragment state", () => {
  it("page mounts mirror query and page into the fragment", async () => {
    const body = searchBody(makeRows(Array.from({ length: 20 }, (_, i) => `r${i}`)), {
      total_results: 45,
      page: 1,
    });
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(body)));
    const widget = mountSearchPage("host", CONFIG);
    await widget.search("shareable", 1);
    expect(window.location.hash).toBe("#q=shareable&page=1");
  });

  it("restores the search from the fragment on mount", async () => {
    window.location.hash = "#q=restored";
    const body = searchBody(makeRows(["hit"]), { query: "restored" });
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(body)));
    const widget = mountSearchPage("host", CONFIG);
    await settle();
    const input = widget.shadowRoot!.querySelector("input") as HTMLInputElement;
    expect(input.value).toBe("restored");
    expect(widget.response!.rows[0].id).toBe("hit");
  });

  it("embedded mounts leave the fragment alone", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse(searchBody(makeRows(["x"])))),
    );
    const widget = mountWidget();
    await widget.search("quiet", 0);
    expect(window.location.hash).toBe("");
  });
});
