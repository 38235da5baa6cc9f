import { describe, expect, it } from "vitest";

import {
  NA,
  validateParaphrase,
  validateVerdict,
  validateWriteQuestion,
} from "../src/validation.js";

describe("write-question validation", () => {
  it("accepts a question ending with a question mark", () => {
    const got = validateWriteQuestion("Would you like a bike? ", false);
    expect(got).toEqual({ ok: true, body: "Would you like a bike?" });
  });

  it("blocks text without a question mark", () => {
    const got = validateWriteQuestion("great bike", false);
    expect(got.ok).toBe(false);
  });

  it("blocks empty input", () => {
    expect(validateWriteQuestion("   ", false).ok).toBe(false);
  });

  it("marking N/A wins over the text box", () => {
    expect(validateWriteQuestion("ignored", true)).toEqual({ ok: true, body: NA });
  });
});

describe("verdict validation", () => {
  const full = {
    grammatical: true,
    yesno_answerable: false,
    mentions_usage: true,
    asker: "salesperson" as const,
  };

  it("accepts a fully answered form", () => {
    expect(validateVerdict(full)).toEqual({ ok: true, body: full });
  });

  it("blocks when any of the four answers is missing", () => {
    for (const key of Object.keys(full) as (keyof typeof full)[]) {
      const partial = { ...full } as Partial<typeof full>;
      delete partial[key];
      expect(validateVerdict(partial).ok).toBe(false);
    }
  });
});

describe("paraphrase validation", () => {
  const shown = [
    "Would you like a blender?",
    "Do you want a blender?",
    "Are you looking for a blender?",
  ];

  it("accepts a fresh paraphrase", () => {
    const got = validateParaphrase("Is a blender what you need?", shown);
    expect(got).toEqual({ ok: true, body: "Is a blender what you need?" });
  });

  it("blocks empty and non-question input", () => {
    expect(validateParaphrase("", shown).ok).toBe(false);
    expect(validateParaphrase("a blender", shown).ok).toBe(false);
  });

  it("blocks a copy of any shown question, ignoring case", () => {
    expect(validateParaphrase("would you like a blender?", shown).ok).toBe(false);
    expect(validateParaphrase("  Do you want a blender?  ", shown).ok).toBe(false);
  });
});
