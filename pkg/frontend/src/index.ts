export { UiConfig, loadConfig, parseConfig } from "./config.js";
export {
  DocumentResponse,
  ResultRow,
  SearchClient,
  SearchResponse,
  ServiceError,
} from "./api.js";
export { lastPage, numPages, pageWindow } from "./pager.js";
export { snippetToNodes } from "./snippet.js";
export { PlugsearchWidget, defineWidget } from "./widget.js";
export { mountSearchPage, mountSearchWidget } from "./mount.js";
