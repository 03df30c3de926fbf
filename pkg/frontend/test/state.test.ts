import { describe, expect, it } from "vitest";

import { EMPTY_FILTER } from "../src/api.js";
import { parseViewState, serializeViewState, TABS, type ViewState } from "../src/state.js";

describe("parseViewState", () => {
  it("yields the default state for an empty query", () => {
    const state = parseViewState("");
    expect(state).toEqual({ benchmark: null, filter: EMPTY_FILTER, tab: "table", sort: null });
  });

  it("reads every parameter", () => {
    const state = parseViewState(
      "?benchmark=mock-suite&task_types=retrieval,sts&languages=eng-Latn&domains=news,web" +
        "&min_zero_shot=0.5&include_unknown=false&tab=performance_vs_size&sort=-mean",
    );
    expect(state).toEqual({
      benchmark: "mock-suite",
      filter: {
        taskTypes: ["retrieval", "sts"],
        languages: ["eng-Latn"],
        domains: ["news", "web"],
        minZeroShot: 0.5,
        includeUnknown: false,
      },
      tab: "performance_vs_size",
      sort: { column: "mean", descending: true },
    });
  });

  it("treats malformed or unknown values as defaults", () => {
    const state = parseViewState("min_zero_shot=abc&tab=bogus&task_types=");
    expect(state.filter.minZeroShot).toBeNull();
    expect(state.tab).toBe("table");
    expect(state.filter.taskTypes).toBeNull();
  });

  it("parses an ascending sort without the minus prefix", () => {
    expect(parseViewState("sort=model").sort).toEqual({ column: "model", descending: false });
  });
});

describe("URL round trip", () => {
  const canonical = [
    "",
    "benchmark=mock-suite",
    "benchmark=mock-suite&task_types=retrieval,sts",
    "benchmark=mock-suite&task_types=classification&languages=eng-Latn,fra-Latn&domains=news" +
      "&min_zero_shot=0.75&include_unknown=false&tab=performance_vs_zero_shot&sort=-type:retrieval",
    "task_types=sts&tab=per_task_type",
    "sort=model",
    "min_zero_shot=0",
  ];

  it("serialize(parse(q)) === q for canonical query strings", () => {
    for (const query of canonical) {
      expect(serializeViewState(parseViewState(query))).toBe(query);
    }
  });

  it("normalizes explicit defaults and parameter order away", () => {
    expect(serializeViewState(parseViewState("tab=table"))).toBe("");
    expect(serializeViewState(parseViewState("include_unknown=true"))).toBe("");
    expect(serializeViewState(parseViewState("tab=per_task_type&benchmark=x"))).toBe(
      "benchmark=x&tab=per_task_type",
    );
  });

  it("parse(serialize(s)) deep-equals s for generated states", () => {
    // small deterministic PRNG so failures reproduce
    let seed = 0x2545f491;
    const rand = () => {
      seed ^= seed << 13;
      seed ^= seed >>> 17;
      seed ^= seed << 5;
      seed >>>= 0;
      return seed / 0x100000000;
    };
    const pick = <T>(items: readonly T[]): T => items[Math.floor(rand() * items.length)]!;
    const maybeList = (pool: string[]): string[] | null => {
      const size = Math.floor(rand() * (pool.length + 1));
      if (size === 0) return null;
      return pool.slice(0, size);
    };

    for (let i = 0; i < 300; i++) {
      const state: ViewState = {
        benchmark: pick([null, "mock-suite", "big-bench"]),
        filter: {
          taskTypes: maybeList(["classification", "clustering", "retrieval", "sts"]),
          languages: maybeList(["eng-Latn", "fra-Latn"]),
          domains: maybeList(["news", "web", "reviews"]),
          minZeroShot: pick([null, 0, 0.25, 0.5, 0.75, 1]),
          includeUnknown: rand() < 0.5,
        },
        tab: pick(TABS),
        sort:
          rand() < 0.3
            ? null
            : {
                column: pick(["rank", "model", "mean", "type:retrieval", "task:mock-sts", "parameters"]),
                descending: rand() < 0.5,
              },
      };
      const query = serializeViewState(state);
      expect(parseViewState(query)).toEqual(state);
      expect(serializeViewState(parseViewState(query))).toBe(query);
    }
  });
});
