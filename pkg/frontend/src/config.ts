/** UI configuration, normally loaded from a scaffolded app's config.json. */
export interface UiConfig {
  serviceUrl: string;
  title: string;
  textField: string;
  metadataField: string;
  resultsPerPage: number;
}

const DEFAULT_RESULTS_PER_PAGE = 20;

/** Raw shape of the scaffold's config.json. */
interface RawConfig {
  title?: unknown;
  text_field?: unknown;
  metadata_field?: unknown;
  service_url?: unknown;
  results_per_page?: unknown;
}

function nonEmpty(value: unknown, key: string): string {
  if (typeof value !== "string" || value.trim() === "") {
    throw new Error(`config.json: "${key}" must be a non-empty string`);
  }
  return value;
}

/** Validate a parsed config.json object into a UiConfig. */
export function parseConfig(raw: RawConfig): UiConfig {
  let perPage = DEFAULT_RESULTS_PER_PAGE;
  if (raw.results_per_page !== undefined) {
    perPage = Number(raw.results_per_page);
    if (!Number.isInteger(perPage) || perPage < 1) {
      throw new Error(
        `config.json: "results_per_page" must be a positive integer`,
      );
    }
  }
  return {
    serviceUrl: nonEmpty(raw.service_url, "service_url").replace(/\/+$/, ""),
    title: nonEmpty(raw.title, "title"),
    textField: nonEmpty(raw.text_field, "text_field"),
    metadataField: nonEmpty(raw.metadata_field, "metadata_field"),
    resultsPerPage: perPage,
  };
}

/** Fetch and validate a config.json. */
export async function loadConfig(url: string): Promise<UiConfig> {
  const resp = await fetch(url);
  if (!resp.ok) {
    throw new Error(`failed to load ${url}: HTTP ${resp.status}`);
  }
  return parseConfig(await resp.json());
}
