// @vitest-environment happy-dom
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { SearchClient } from "./api.js";
import { AppHandle, createApp } from "./app.js";

const DEBOUNCE_MS = 200;

/** In-memory stand-in for the polyrec service, speaking its JSON contract. */
class FakeService {
  calls: string[] = [];

  private authors = [
    { entity: "surname00000, given00", kind: "author", score: 0.45 },
    { entity: "surname00001, given01", kind: "author", score: 0.31 },
  ];
  private terms = [
    { entity: "concept 000 area 00", kind: "controlled_term", score: 0.29 },
  ];

  fetch = async (input: string | URL | Request): Promise<Response> => {
    const url = new URL(String(input), "http://service");
    this.calls.push(url.pathname + url.search);
    const q = url.searchParams.get("q") ?? "";
    if (q.trim() === "" || q === "the and of") {
      return this.error(400, "empty_query", "query is empty after stopword removal");
    }
    if (url.pathname === "/suggest") {
      const kind = url.searchParams.get("kind");
      return this.json({ suggestions: kind === "author" ? this.authors : this.terms });
    }
    if (url.pathname === "/search") {
      const config = url.searchParams.get("config") ?? "b";
      const hasTe = url.searchParams.has("te");
      const hasAe = url.searchParams.has("ae");
      const te = url.searchParams.getAll("te").filter((v) => v !== "");
      const ae = url.searchParams.getAll("ae").filter((v) => v !== "");
      const groups = [`TI/AB = (${q})`];
      if (config.includes("te")) {
        const accepted = hasTe ? te : this.terms.map((t) => t.entity);
        if (accepted.length === 0) {
          return this.error(400, "missing_expansion",
            `${config} requires a thesaurus-term expansion but none was given`);
        }
        groups.push(`OR CT = (${accepted.join(" OR ")})`);
      }
      if (config.includes("ae")) {
        const accepted = hasAe ? ae : this.authors.map((a) => a.entity);
        if (accepted.length === 0) {
          return this.error(400, "missing_expansion",
            `${config} requires an author expansion but none was given`);
        }
        groups.push(`OR AU = (${accepted.join(" OR ")})`);
      }
      return this.json({
        rendered_query: groups.join("\n"),
        results: [{ doc_id: "doc-t000-00", score: 3.5, title: "fixture doc" }],
      });
    }
    return this.error(404, "not_found", "no such endpoint");
  };

  private json(body: unknown): Response {
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  }

  private error(status: number, code: string, message: string): Response {
    return new Response(JSON.stringify({ error: code, message }), {
      status,
      headers: { "content-type": "application/json" },
    });
  }
}

let service: FakeService;
let app: AppHandle;
let root: HTMLElement;

function queryInput(): HTMLInputElement {
  return root.querySelector('[data-role="query"]') as HTMLInputElement;
}

function typeQuery(text: string): void {
  const input = queryInput();
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

async function settle(): Promise<void> {
  await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
  await app.idle();
}

function panelEntities(role: "authors" | "terms"): string[] {
  return Array.from(
    root.querySelectorAll(`[data-role="${role}"] .chip`),
    (node) => node.getAttribute("data-entity") ?? "",
  );
}

function clickChip(role: "authors" | "terms", entity: string): void {
  const chip = Array.from(
    root.querySelectorAll(`[data-role="${role}"] .chip`),
  ).find((node) => node.getAttribute("data-entity") === entity) as HTMLButtonElement;
  chip.click();
}

beforeEach(() => {
  vi.useFakeTimers();
  service = new FakeService();
  root = document.createElement("div");
  document.body.append(root);
  app = createApp(root, new SearchClient("http://service", service.fetch), {
    debounceMs: DEBOUNCE_MS,
  });
});

afterEach(() => {
  app.destroy();
  root.remove();
  vi.useRealTimers();
});

describe("query input and suggestion panels", () => {
  it("shows topical authors within one debounce interval", async () => {
    typeQuery("topic000term00");
    expect(service.calls).toHaveLength(0); // debounced, nothing yet
    await settle();
    expect(panelEntities("authors")).toEqual([
      "surname00000, given00",
      "surname00001, given01",
    ]);
    expect(panelEntities("terms")).toEqual(["concept 000 area 00"]);
  });

  it("collapses rapid keystrokes into one suggestion request", async () => {
    typeQuery("t");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS / 2);
    typeQuery("to");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS / 2);
    typeQuery("topic000term00");
    await settle();
    const suggestCalls = service.calls.filter((c) => c.startsWith("/suggest"));
    expect(suggestCalls).toHaveLength(2); // one per panel, for the final text
    expect(suggestCalls[0]).toContain("q=topic000term00");
  });

  it("clearing the box clears both panels", async () => {
    typeQuery("topic000term00");
    await settle();
    expect(panelEntities("authors")).not.toHaveLength(0);
    typeQuery("");
    await app.idle();
    expect(panelEntities("authors")).toHaveLength(0);
    expect(panelEntities("terms")).toHaveLength(0);
  });

  it("surfaces the service error for stopword-only input", async () => {
    typeQuery("the and of");
    await settle();
    expect(root.querySelector('[data-role="error"]')?.textContent).toContain(
      "query is empty");
    expect(panelEntities("authors")).toHaveLength(0);
  });
});

describe("chips, configuration, and search", () => {
  it("accepting a chip searches with it and displays the rendered query verbatim", async () => {
    typeQuery("topic000term00");
    await settle();
    clickChip("authors", "surname00000, given00");
    await app.idle();

    const lastSearch = service.calls.filter((c) => c.startsWith("/search")).pop()!;
    const params = new URLSearchParams(lastSearch.split("?")[1]);
    expect(params.getAll("ae")).toEqual(["surname00000, given00"]);
    expect(params.has("te")).toBe(false); // untouched panel stays service-computed

    const shown = root.querySelector('[data-role="rendered-query"]')?.textContent;
    expect(shown).toBe(
      "TI/AB = (topic000term00)\n" +
        "OR CT = (concept 000 area 00)\n" +
        "OR AU = (surname00000, given00)",
    );
    expect(root.querySelectorAll('[data-role="results"] li')).toHaveLength(1);
  });

  it("config b hides chip effects in the rendered query", async () => {
    typeQuery("topic000term00");
    await settle();
    clickChip("authors", "surname00000, given00");
    await app.idle();
    const select = root.querySelector('[data-role="config"]') as HTMLSelectElement;
    select.value = "b";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await app.idle();
    const shown = root.querySelector('[data-role="rendered-query"]')?.textContent;
    expect(shown).toBe("TI/AB = (topic000term00)");
    expect(app.state.acceptedAuthors).toEqual(["surname00000, given00"]); // preserved
  });

  it("deselecting every author chip under b+ae surfaces the contract error", async () => {
    typeQuery("topic000term00");
    await settle();
    const select = root.querySelector('[data-role="config"]') as HTMLSelectElement;
    select.value = "b+ae";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await app.idle();

    clickChip("authors", "surname00000, given00");
    await app.idle();
    expect(root.querySelector('[data-role="error"]')?.textContent).toBe("");

    clickChip("authors", "surname00000, given00"); // retract: accepted set now empty
    await app.idle();
    expect(root.querySelector('[data-role="error"]')?.textContent).toContain(
      "author expansion");
    // prior results are retained alongside the inline error
    expect(root.querySelectorAll('[data-role="results"] li')).toHaveLength(1);
  });

  it("pressing enter runs the search for the typed query", async () => {
    typeQuery("topic000term00");
    await settle();
    queryInput().dispatchEvent(
      new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await app.idle();
    expect(service.calls.some((c) => c.startsWith("/search"))).toBe(true);
  });
});
