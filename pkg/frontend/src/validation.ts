// Client-side checks; the service enforces the same rules server-side.

import type { ResponseBody, Verdict } from "./api.js";

export const NA = "N/A";

export interface Invalid {
  ok: false;
  reason: string;
}

export interface Valid {
  ok: true;
  body: ResponseBody;
}

export type Validation = Valid | Invalid;

const bad = (reason: string): Invalid => ({ ok: false, reason });

export function validateWriteQuestion(text: string, markedNa: boolean): Validation {
  if (markedNa) return { ok: true, body: NA };
  const trimmed = text.trim();
  if (!trimmed) return bad("Write a question or mark the sentence as N/A.");
  if (!trimmed.endsWith("?")) return bad("A question has to end with a question mark.");
  return { ok: true, body: trimmed };
}

export function validateVerdict(partial: Partial<Verdict>): Validation {
  if (
    partial.grammatical === undefined ||
    partial.yesno_answerable === undefined ||
    partial.mentions_usage === undefined ||
    partial.asker === undefined
  ) {
    return bad("Answer all four questions before submitting.");
  }
  return { ok: true, body: partial as Verdict };
}

export function validateParaphrase(text: string, shown: string[]): Validation {
  const trimmed = text.trim();
  if (!trimmed) return bad("Write a paraphrase first.");
  if (!trimmed.endsWith("?")) return bad("A paraphrase has to end with a question mark.");
  const same = shown.some(
    (q) => q.trim().toLowerCase() === trimmed.toLowerCase()
  );
  if (same) return bad("The paraphrase must differ from all three questions shown.");
  return { ok: true, body: trimmed };
}
