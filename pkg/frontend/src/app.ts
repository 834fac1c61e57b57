/** DOM wiring for the query-formulation client.
 *
 * Thin client contract: every rendered query and result list comes verbatim
 * from the service; the UI never reconstructs queries locally. Suggestion
 * requests are debounced and versioned so a stale response never overwrites
 * a newer one (last write wins).
 */

import { ApiError, SearchClient } from "./api.js";
import type { RunConfigTag, Suggestion } from "./api.js";
import { debounce } from "./debounce.js";
import {
  SessionState,
  applySearchError,
  applySearchResponse,
  chipActive,
  clearSuggestions,
  initialState,
  setConfig,
  setQuery,
  setSuggestions,
  toggleChip,
} from "./state.js";

export interface AppOptions {
  debounceMs?: number;
  resultCount?: number;
}

export interface AppHandle {
  readonly state: SessionState;
  /** Resolves when in-flight suggestion/search requests have settled. */
  idle(): Promise<void>;
  destroy(): void;
}

const CONFIGS: RunConfigTag[] = ["b", "b+te", "b+ae", "b+te+ae"];

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function createApp(
  root: HTMLElement,
  client: SearchClient,
  options: AppOptions = {},
): AppHandle {
  const debounceMs = options.debounceMs ?? 250;
  const resultCount = options.resultCount ?? 10;

  let state = initialState();
  let suggestSeq = 0;
  let searchSeq = 0;
  // once the user toggles a chip the accepted subset is authoritative and is
  // sent explicitly, even when it becomes empty (the service then reports the
  // missing-expansion contract error)
  let touchedAuthors = false;
  let touchedTerms = false;
  let pending: Promise<unknown>[] = [];

  root.innerHTML = "";
  const queryInput = element("input");
  queryInput.type = "search";
  queryInput.placeholder = "Type a topic, e.g. retirement health";
  queryInput.setAttribute("data-role", "query");

  const configSelect = element("select");
  configSelect.setAttribute("data-role", "config");
  for (const tag of CONFIGS) {
    const option = element("option", undefined, tag);
    option.value = tag;
    configSelect.append(option);
  }
  configSelect.value = state.config;

  const searchButton = element("button", undefined, "Search");
  searchButton.setAttribute("data-role", "search");

  const errorBox = element("div", "error");
  errorBox.setAttribute("data-role", "error");

  const authorPanel = element("ul", "panel");
  authorPanel.setAttribute("data-role", "authors");
  const termPanel = element("ul", "panel");
  termPanel.setAttribute("data-role", "terms");

  const renderedQuery = element("pre", "rendered-query");
  renderedQuery.setAttribute("data-role", "rendered-query");

  const resultList = element("ol", "results");
  resultList.setAttribute("data-role", "results");

  const controls = element("div", "controls");
  controls.append(queryInput, configSelect, searchButton);
  const panels = element("div", "panels");
  const authorBlock = element("div");
  authorBlock.append(element("h3", undefined, "Authors"), authorPanel);
  const termBlock = element("div");
  termBlock.append(element("h3", undefined, "Controlled terms"), termPanel);
  panels.append(authorBlock, termBlock);
  root.append(controls, errorBox, panels, renderedQuery, resultList);

  function renderPanel(
    panel: HTMLUListElement,
    suggestions: Suggestion[],
    kind: "author" | "controlled_term",
  ): void {
    panel.innerHTML = "";
    for (const suggestion of suggestions) {
      const item = element("li");
      const chip = element("button", "chip", suggestion.entity);
      chip.setAttribute("data-entity", suggestion.entity);
      chip.setAttribute("data-kind", kind);
      if (chipActive(state, kind, suggestion.entity)) chip.classList.add("active");
      chip.addEventListener("click", () => onChipToggle(kind, suggestion.entity));
      item.append(chip, element("span", "score", ` ${suggestion.score.toFixed(6)}`));
      panel.append(item);
    }
  }

  function render(): void {
    errorBox.textContent = state.error ?? "";
    renderPanel(authorPanel, state.authorSuggestions, "author");
    renderPanel(termPanel, state.termSuggestions, "controlled_term");
    renderedQuery.textContent = state.renderedQuery;
    resultList.innerHTML = "";
    for (const row of state.results) {
      const item = element("li");
      item.append(
        element("span", "doc-id", row.doc_id),
        element("span", "title", ` ${row.title} `),
        element("span", "score", row.score.toFixed(6)),
      );
      resultList.append(item);
    }
  }

  function track<T>(promise: Promise<T>): Promise<T> {
    pending.push(promise);
    promise.finally(() => {
      pending = pending.filter((p) => p !== promise);
    });
    return promise;
  }

  function refreshSuggestions(): void {
    const seq = ++suggestSeq;
    const q = state.query;
    track(
      Promise.all([
        client.suggest(q, "author"),
        client.suggest(q, "controlled_term"),
      ])
        .then(([authors, terms]) => {
          if (seq !== suggestSeq) return; // superseded by newer input
          state = setSuggestions(state, authors, terms);
          render();
        })
        .catch((error: unknown) => {
          if (seq !== suggestSeq) return;
          const message = error instanceof ApiError ? error.message : String(error);
          state = clearSuggestions(state, message);
          render();
        }),
    );
  }

  const debouncedSuggest = debounce(refreshSuggestions, debounceMs);

  function runSearch(): void {
    if (state.query.trim() === "") return;
    const seq = ++searchSeq;
    track(
      client
        .search({
          q: state.query,
          config: state.config,
          k: resultCount,
          te: touchedTerms ? state.acceptedTerms : undefined,
          ae: touchedAuthors ? state.acceptedAuthors : undefined,
        })
        .then((response) => {
          if (seq !== searchSeq) return;
          state = applySearchResponse(state, response.rendered_query, response.results);
          render();
        })
        .catch((error: unknown) => {
          if (seq !== searchSeq) return;
          const message = error instanceof ApiError ? error.message : String(error);
          state = applySearchError(state, message); // prior results retained
          render();
        }),
    );
  }

  function onChipToggle(kind: "author" | "controlled_term", entity: string): void {
    state = toggleChip(state, kind, entity);
    if (kind === "author") touchedAuthors = true;
    else touchedTerms = true;
    render();
    runSearch();
  }

  queryInput.addEventListener("input", () => {
    state = setQuery(state, queryInput.value);
    if (state.query === "") {
      debouncedSuggest.cancel();
      touchedAuthors = false;
      touchedTerms = false;
      render();
      return;
    }
    debouncedSuggest();
  });
  queryInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") runSearch();
  });
  configSelect.addEventListener("change", () => {
    state = setConfig(state, configSelect.value as RunConfigTag);
    render(); // accepted chips survive the config change
    runSearch();
  });
  searchButton.addEventListener("click", runSearch);

  render();

  return {
    get state() {
      return state;
    },
    async idle() {
      while (pending.length > 0) {
        await Promise.allSettled(pending);
      }
    },
    destroy() {
      debouncedSuggest.cancel();
      root.innerHTML = "";
    },
  };
}
