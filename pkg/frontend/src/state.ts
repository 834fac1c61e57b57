/** Session state for query formulation, kept separate from the DOM so the
 * invariants are testable: chips may only hold entities that a suggestion
 * panel returned (or that are already accepted), and changing the run
 * configuration never discards accepted chips. */

import type { RunConfigTag, SearchResultRow, Suggestion } from "./api.js";

export interface SessionState {
  query: string;
  config: RunConfigTag;
  authorSuggestions: Suggestion[];
  termSuggestions: Suggestion[];
  acceptedAuthors: string[];
  acceptedTerms: string[];
  renderedQuery: string;
  results: SearchResultRow[];
  error: string | null;
}

export function initialState(): SessionState {
  return {
    query: "",
    config: "b+te+ae",
    authorSuggestions: [],
    termSuggestions: [],
    acceptedAuthors: [],
    acceptedTerms: [],
    renderedQuery: "",
    results: [],
    error: null,
  };
}

export function setQuery(state: SessionState, query: string): SessionState {
  if (query.trim() === "") {
    // clearing the box clears the panels and the chips that came from them
    return {
      ...initialState(),
      config: state.config,
    };
  }
  return { ...state, query, error: null };
}

export function setSuggestions(
  state: SessionState,
  authors: Suggestion[],
  terms: Suggestion[],
): SessionState {
  return { ...state, authorSuggestions: authors, termSuggestions: terms, error: null };
}

export function clearSuggestions(state: SessionState, error: string | null): SessionState {
  return { ...state, authorSuggestions: [], termSuggestions: [], error };
}

function offeredEntities(state: SessionState, kind: "author" | "controlled_term"): string[] {
  const panel = kind === "author" ? state.authorSuggestions : state.termSuggestions;
  return panel.map((s) => s.entity);
}

/** Accept or retract a chip; unknown entities (never suggested, not accepted)
 * are ignored so the chip set stays consistent with the service. */
export function toggleChip(
  state: SessionState,
  kind: "author" | "controlled_term",
  entity: string,
): SessionState {
  const accepted = kind === "author" ? state.acceptedAuthors : state.acceptedTerms;
  let next: string[];
  if (accepted.includes(entity)) {
    next = accepted.filter((e) => e !== entity);
  } else if (offeredEntities(state, kind).includes(entity)) {
    next = [...accepted, entity];
  } else {
    return state;
  }
  return kind === "author"
    ? { ...state, acceptedAuthors: next }
    : { ...state, acceptedTerms: next };
}

export function setConfig(state: SessionState, config: RunConfigTag): SessionState {
  return { ...state, config };
}

export function applySearchResponse(
  state: SessionState,
  renderedQuery: string,
  results: SearchResultRow[],
): SessionState {
  return { ...state, renderedQuery, results, error: null };
}

/** Service errors are surfaced inline; prior results stay visible. */
export function applySearchError(state: SessionState, message: string): SessionState {
  return { ...state, error: message };
}

export function chipActive(
  state: SessionState,
  kind: "author" | "controlled_term",
  entity: string,
): boolean {
  const accepted = kind === "author" ? state.acceptedAuthors : state.acceptedTerms;
  return accepted.includes(entity);
}
