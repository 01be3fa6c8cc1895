/**
 * <plugsearch-widget>: the full search page as an embeddable component.
 *
 * All markup lives in a shadow root so styles never leak into the host
 * page and multiple widgets with different configs coexist. A single
 * search request is in flight at a time; a new submission aborts the
 * pending one so the results always correspond to the query box.
 */

import { SearchClient, SearchResponse, ServiceError } from "./api.js";
import { UiConfig } from "./config.js";
import { lastPage, numPages, pageWindow } from "./pager.js";
import { snippetToNodes } from "./snippet.js";

const STYLE = `
  :host { display: block; font-family: system-ui, sans-serif; }
  form { display: flex; gap: 0.5rem; margin: 0.5rem 0; }
  input[type=search] { flex: 1; padding: 0.4rem; }
  .banner { background: #fdd; border: 1px solid #c99; padding: 0.5rem;
            margin: 0.5rem 0; }
  .banner[hidden] { display: none; }
  .row { border-bottom: 1px solid #ddd; padding: 0.5rem 0; }
  .row .snippet em { background: #ffefb3; font-style: normal;
                     font-weight: 600; }
  .row .meta { color: #666; font-size: 0.85em; }
  nav button { margin-right: 0.25rem; }
  nav button[disabled] { opacity: 0.5; }
  nav button.current { font-weight: 700; }
`;

export interface WidgetOptions {
  /** Mirror q/page into the URL fragment (shareable links). */
  fragmentState?: boolean;
}

export class PlugsearchWidget extends HTMLElement {
  private config: UiConfig | null = null;
  private client: SearchClient | null = null;
  private fragmentState = false;
  private controller: AbortController | null = null;
  private requestSeq = 0;
  private lastResponse: SearchResponse | null = null;

  private input!: HTMLInputElement;
  private banner!: HTMLElement;
  private status!: HTMLElement;
  private results!: HTMLElement;
  private pager!: HTMLElement;

  configure(config: UiConfig, options: WidgetOptions = {}): void {
    this.config = config;
    this.client = new SearchClient(config.serviceUrl);
    this.fragmentState = options.fragmentState ?? false;
    if (this.isConnected) this.render();
  }

  connectedCallback(): void {
    this.render();
  }

  private render(): void {
    const root = this.shadowRoot ?? this.attachShadow({ mode: "open" });
    root.innerHTML = "";
    const doc = this.ownerDocument;

    const style = doc.createElement("style");
    style.textContent = STYLE;
    root.appendChild(style);

    const heading = doc.createElement("h2");
    heading.textContent = this.config?.title ?? "Search";
    root.appendChild(heading);

    const form = doc.createElement("form");
    this.input = doc.createElement("input");
    this.input.type = "search";
    this.input.setAttribute("placeholder", "Search…");
    const submit = doc.createElement("button");
    submit.type = "submit";
    submit.textContent = "Search";
    form.append(this.input, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.search(this.input.value, 0);
    });
    root.appendChild(form);

    this.banner = doc.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;
    root.appendChild(this.banner);

    this.status = doc.createElement("p");
    this.status.className = "status";
    root.appendChild(this.status);

    this.results = doc.createElement("div");
    this.results.className = "results";
    root.appendChild(this.results);

    this.pager = doc.createElement("nav");
    root.appendChild(this.pager);

    if (this.fragmentState) this.restoreFromFragment();
  }

  private restoreFromFragment(): void {
    const params = new URLSearchParams(
      this.ownerDocument.defaultView?.location.hash.slice(1) ?? "",
    );
    const q = params.get("q");
    if (q) {
      this.input.value = q;
      const page = Math.max(0, Number(params.get("page")) || 0);
      void this.search(q, page);
    }
  }

  private writeFragment(q: string, page: number): void {
    if (!this.fragmentState) return;
    const win = this.ownerDocument.defaultView;
    if (!win) return;
    const params = new URLSearchParams({ q });
    if (page > 0) params.set("page", String(page));
    win.location.hash = params.toString();
  }

  /** Run a search; the latest submission always wins. */
  async search(q: string, page: number): Promise<void> {
    if (!this.client || !this.config) {
      throw new Error("widget not configured; call configure() first");
    }
    if (q.trim() === "") return;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const seq = ++this.requestSeq;
    try {
      const resp = await this.client.search(
        q,
        page,
        this.config.resultsPerPage,
        100,
        controller.signal,
      );
      if (seq !== this.requestSeq) return; // a newer request finished
      this.lastResponse = resp;
      this.banner.hidden = true;
      this.renderResults(resp);
      this.writeFragment(q, page);
    } catch (err) {
      if ((err as Error)?.name === "AbortError") return;
      if (seq !== this.requestSeq) return;
      this.showError(
        err instanceof ServiceError ? err.message : `search failed: ${err}`,
      );
    }
  }

  private showError(detail: string): void {
    this.banner.textContent = detail;
    this.banner.hidden = false;
    this.results.innerHTML = "";
    this.pager.innerHTML = "";
    this.status.textContent = "";
  }

  private renderResults(resp: SearchResponse): void {
    const doc = this.ownerDocument;
    this.status.textContent = `${resp.total_results} result(s)`;
    this.results.innerHTML = "";
    for (const row of resp.rows) {
      // response order is presentation order; never re-sorted client-side
      const div = doc.createElement("div");
      div.className = "row";
      const head = doc.createElement("div");
      head.className = "meta";
      const metaValue = row.metadata[this.config!.metadataField] ?? row.id;
      head.textContent = `${metaValue} — score ${row.score.toFixed(4)}`;
      const snippet = doc.createElement("div");
      snippet.className = "snippet";
      snippet.append(...snippetToNodes(row.snippet, doc));
      div.append(head, snippet);
      this.results.appendChild(div);
    }
    this.renderPager(resp);
  }

  private renderPager(resp: SearchResponse): void {
    const doc = this.ownerDocument;
    this.pager.innerHTML = "";
    const pages = numPages(resp.total_results, resp.per_page);
    if (pages <= 1) return;
    const current = resp.page;
    const goto = (page: number) => () => void this.search(resp.query, page);

    const control = (label: string, page: number, disabled: boolean) => {
      const btn = doc.createElement("button");
      btn.textContent = label;
      btn.disabled = disabled;
      btn.dataset.page = String(page);
      btn.addEventListener("click", goto(page));
      return btn;
    };
    this.pager.appendChild(control("First", 0, current === 0));
    this.pager.appendChild(control("Prev", current - 1, current === 0));
    for (const p of pageWindow(current, pages)) {
      const btn = control(String(p + 1), p, false);
      if (p === current) btn.classList.add("current");
      this.pager.appendChild(btn);
    }
    this.pager.appendChild(
      control("Next", current + 1, current >= pages - 1),
    );
    this.pager.appendChild(
      control(
        "Last",
        lastPage(resp.total_results, resp.per_page),
        current >= pages - 1,
      ),
    );
  }

  /** Most recent successful response (for host-page integrations). */
  get response(): SearchResponse | null {
    return this.lastResponse;
  }
}

export function defineWidget(): void {
  if (!customElements.get("plugsearch-widget")) {
    customElements.define("plugsearch-widget", PlugsearchWidget);
  }
}
