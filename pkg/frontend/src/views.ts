// DOM construction for the three task cards plus idle and progress panels.
// Render functions are pure w.r.t. the task payload; form state lives in the
// returned elements and is read back on submit.

import type { Progress, TaskView, Verdict } from "./api.js";
import { INSTRUCTIONS, VALIDATE_CHECKS } from "./instructions.js";

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") el.className = value;
    else el.setAttribute(key, value);
  }
  el.append(...children);
  return el;
}

export function renderIdle(container: HTMLElement): void {
  container.replaceChildren(
    h("div", { class: "idle", id: "idle" },
      h("p", {}, "No task available right now."),
      h("p", { class: "muted" },
        "Everything may be leased to other annotators or already finished; try again shortly."))
  );
}

export function renderTask(container: HTMLElement, task: TaskView): void {
  if (task.step === "WRITE_QUESTION") {
    renderWrite(container, task);
  } else if (task.step === "VALIDATE") {
    renderValidate(container, task);
  } else {
    renderParaphrase(container, task);
  }
}

function header(task: TaskView, title: string): HTMLElement {
  return h("div", { class: "task-header" },
    h("h2", {}, title),
    h("p", { class: "instructions" }, INSTRUCTIONS[task.step]),
    h("p", { class: "muted" },
      `Task ${task.task_id} - category: ${task.payload.category}`));
}

function renderWrite(container: HTMLElement, task: TaskView): void {
  const card = h("form", { class: "card", id: "write-card", "data-step": task.step },
    header(task, "Step 1 - Write a question"),
    h("blockquote", { class: "sentence", id: "source-sentence" },
      task.payload.sentence ?? ""),
    h("label", { for: "question-input" }, "Your question"),
    h("textarea", { id: "question-input", rows: "3",
      placeholder: "Would you like a ... ?" }),
    h("div", { class: "actions" },
      h("button", { type: "submit", id: "submit-question" }, "Submit question"),
      h("button", { type: "button", id: "submit-na", class: "secondary" },
        "Not applicable (N/A)")),
    h("p", { class: "error", id: "form-error" }));
  container.replaceChildren(card);
}

function renderValidate(container: HTMLElement, task: TaskView): void {
  const groups = VALIDATE_CHECKS.map((check) =>
    h("fieldset", { class: "check", "data-check": check.key },
      h("legend", {}, check.label),
      ...check.options.map((opt) =>
        h("label", { class: "option" },
          h("input", {
            type: "radio",
            name: check.key,
            value: opt.value,
          }),
          opt.label))));
  const card = h("form", { class: "card", id: "validate-card", "data-step": task.step },
    header(task, "Step 2 - Validate a question"),
    h("blockquote", { class: "question", id: "question-under-review" },
      task.payload.question ?? ""),
    ...groups,
    h("div", { class: "actions" },
      h("button", { type: "submit", id: "submit-verdict" }, "Submit answers")),
    h("p", { class: "error", id: "form-error" }));
  container.replaceChildren(card);
}

function renderParaphrase(container: HTMLElement, task: TaskView): void {
  // Paraphrasers see only the questions, never the source sentence.
  const shown = task.payload.questions ?? [];
  const card = h("form", { class: "card", id: "paraphrase-card", "data-step": task.step },
    header(task, "Step 3 - Paraphrase"),
    h("ol", { class: "question-triple", id: "question-triple" },
      ...shown.map((q) => h("li", {}, q))),
    h("label", { for: "paraphrase-input" }, "Your paraphrase"),
    h("textarea", { id: "paraphrase-input", rows: "3" }),
    h("div", { class: "actions" },
      h("button", { type: "submit", id: "submit-paraphrase" }, "Submit paraphrase")),
    h("p", { class: "error", id: "form-error" }));
  container.replaceChildren(card);
}

export function readVerdictForm(container: HTMLElement): Partial<Verdict> {
  const out: Record<string, unknown> = {};
  for (const check of VALIDATE_CHECKS) {
    const picked = container.querySelector<HTMLInputElement>(
      `input[name="${check.key}"]:checked`
    );
    if (!picked) continue;
    out[check.key] =
      check.key === "asker" ? picked.value : picked.value === "yes";
  }
  return out as Partial<Verdict>;
}

export function showFormError(container: HTMLElement, message: string): void {
  const slot = container.querySelector<HTMLElement>("#form-error");
  if (slot) slot.textContent = message;
}

export function renderProgress(panel: HTMLElement, progress: Progress): void {
  const row = (label: string, s: { open: number; closed: number; rerun: number }) =>
    h("tr", {},
      h("td", {}, label),
      h("td", { class: "num" }, String(s.open)),
      h("td", { class: "num" }, String(s.closed + s.rerun)));
  panel.replaceChildren(
    h("h3", {}, "Progress"),
    h("table", { class: "progress" },
      h("thead", {},
        h("tr", {}, h("th", {}, "step"), h("th", {}, "open"), h("th", {}, "done"))),
      h("tbody", {},
        row("write", progress.WRITE_QUESTION),
        row("validate", progress.VALIDATE),
        row("paraphrase", progress.PARAPHRASE))),
    h("p", { class: "muted", id: "records-done" },
      `${progress.records_done} records completed`));
}
