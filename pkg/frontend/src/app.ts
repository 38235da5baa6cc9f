// Session wiring: name-based login, one leased task at a time, submit with
// client-side validation, then fetch the next task.

import { AnnotationApi, StaleLeaseError, Step, TaskView } from "./api.js";
import {
  validateParaphrase,
  validateVerdict,
  validateWriteQuestion,
} from "./validation.js";
import {
  readVerdictForm,
  renderIdle,
  renderProgress,
  renderTask,
  showFormError,
} from "./views.js";

export interface AppElements {
  login: HTMLElement;
  workbench: HTMLElement;
  taskArea: HTMLElement;
  progressPanel: HTMLElement;
  status: HTMLElement;
}

export class App {
  workerId: string | null = null;
  current: TaskView | null = null;
  stepFilter: Step | undefined;

  constructor(readonly api: AnnotationApi, readonly el: AppElements) {}

  async login(name: string): Promise<void> {
    const trimmed = name.trim();
    if (!trimmed) {
      this.el.status.textContent = "Enter a name to start annotating.";
      return;
    }
    this.workerId = await this.api.registerWorker(trimmed);
    sessionStorage.setItem("worker_name", trimmed);
    this.el.login.hidden = true;
    this.el.workbench.hidden = false;
    this.el.status.textContent = `Signed in as ${trimmed}`;
    await this.refreshProgress();
    await this.fetchNext();
  }

  setStepFilter(value: string): void {
    this.stepFilter = (value || undefined) as Step | undefined;
  }

  async fetchNext(): Promise<void> {
    if (!this.workerId) return;
    this.current = await this.api.nextTask(this.workerId, this.stepFilter);
    if (this.current === null) {
      renderIdle(this.el.taskArea);
    } else {
      renderTask(this.el.taskArea, this.current);
      this.bindTaskForm();
    }
  }

  private bindTaskForm(): void {
    const form = this.el.taskArea.querySelector<HTMLFormElement>("form.card");
    if (!form || !this.current) return;
    const task = this.current;
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submitCurrent(task, false);
    });
    const naButton = form.querySelector<HTMLButtonElement>("#submit-na");
    naButton?.addEventListener("click", () => {
      void this.submitCurrent(task, true);
    });
  }

  async submitCurrent(task: TaskView, markedNa: boolean): Promise<void> {
    if (!this.workerId) return;
    let verdict;
    if (task.step === "WRITE_QUESTION") {
      const input = this.el.taskArea.querySelector<HTMLTextAreaElement>("#question-input");
      verdict = validateWriteQuestion(input?.value ?? "", markedNa);
    } else if (task.step === "VALIDATE") {
      verdict = validateVerdict(readVerdictForm(this.el.taskArea));
    } else {
      const input = this.el.taskArea.querySelector<HTMLTextAreaElement>("#paraphrase-input");
      verdict = validateParaphrase(input?.value ?? "", task.payload.questions ?? []);
    }
    if (!verdict.ok) {
      showFormError(this.el.taskArea, verdict.reason);
      return;
    }
    try {
      await this.api.submit(this.workerId, task.task_id, verdict.body);
      this.el.status.textContent = "Response recorded.";
    } catch (err) {
      if (err instanceof StaleLeaseError) {
        this.el.status.textContent =
          "Your lease on that task expired; fetching a fresh one.";
      } else {
        this.el.status.textContent = `Submission failed: ${(err as Error).message}`;
        return;
      }
    }
    await this.refreshProgress();
    await this.fetchNext();
  }

  async refreshProgress(): Promise<void> {
    renderProgress(this.el.progressPanel, await this.api.progress());
  }
}

export function mount(root: Document = document): App {
  const api = new AnnotationApi("");
  const el: AppElements = {
    login: root.getElementById("login-view")!,
    workbench: root.getElementById("workbench")!,
    taskArea: root.getElementById("task-area")!,
    progressPanel: root.getElementById("progress-panel")!,
    status: root.getElementById("status-line")!,
  };
  const app = new App(api, el);

  const form = root.getElementById("login-form") as HTMLFormElement;
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const name = (root.getElementById("worker-name") as HTMLInputElement).value;
    void app.login(name);
  });
  const filter = root.getElementById("step-filter") as HTMLSelectElement;
  filter.addEventListener("change", () => {
    app.setStepFilter(filter.value);
    void app.fetchNext();
  });
  const refresh = root.getElementById("refresh-task") as HTMLButtonElement;
  refresh.addEventListener("click", () => void app.fetchNext());

  const remembered = sessionStorage.getItem("worker_name");
  if (remembered) {
    (root.getElementById("worker-name") as HTMLInputElement).value = remembered;
  }
  return app;
}

declare global {
  interface Window {
    __USAGEQ_NO_AUTOMOUNT?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__USAGEQ_NO_AUTOMOUNT) {
  window.addEventListener("DOMContentLoaded", () => mount());
}
