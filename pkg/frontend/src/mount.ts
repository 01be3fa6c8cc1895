import { UiConfig } from "./config.js";
import { PlugsearchWidget, WidgetOptions, defineWidget } from "./widget.js";

/**
 * Mount the search UI into an existing container element.
 *
 * The standalone page is just a widget mounted with fragment state on;
 * embedded widgets default to fragment state off so several instances can
 * coexist without fighting over the URL.
 */
export function mountSearchWidget(
  elementId: string,
  config: UiConfig,
  options: WidgetOptions = {},
  doc: Document = document,
): PlugsearchWidget {
  defineWidget();
  const container = doc.getElementById(elementId);
  if (!container) {
    const message = `plugsearch: no element with id "${elementId}" to mount into`;
    console.error(message);
    throw new Error(message);
  }
  const widget = doc.createElement("plugsearch-widget") as PlugsearchWidget;
  widget.configure(config, options);
  container.appendChild(widget);
  return widget;
}

/** Mount as a full page: same widget, with shareable URL-fragment state. */
export function mountSearchPage(
  elementId: string,
  config: UiConfig,
  doc: Document = document,
): PlugsearchWidget {
  return mountSearchWidget(elementId, config, { fragmentState: true }, doc);
}
