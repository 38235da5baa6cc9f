// Typed client for the annotation-service HTTP endpoints.

export type Step = "WRITE_QUESTION" | "VALIDATE" | "PARAPHRASE";

export interface TaskView {
  task_id: string;
  step: Step;
  payload: {
    record_id: string;
    category: string;
    sentence?: string;
    question?: string;
    questions?: string[];
  };
  state: string;
  n_responses: number;
  quorum: number;
}

export interface Verdict {
  grammatical: boolean;
  yesno_answerable: boolean;
  mentions_usage: boolean;
  asker: "buyer" | "salesperson" | "neither";
}

export type ResponseBody = string | Verdict;

export interface StepProgress {
  open: number;
  leased: number;
  quorum_reached: number;
  closed: number;
  rerun: number;
  expert_queue: number;
}

export interface Progress {
  WRITE_QUESTION: StepProgress;
  VALIDATE: StepProgress;
  PARAPHRASE: StepProgress;
  records_done: number;
}

export class StaleLeaseError extends Error {}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function check(resp: Response): Promise<any> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const message = body.error ?? `HTTP ${resp.status}`;
    if (resp.status === 409) throw new StaleLeaseError(message);
    throw new ApiError(message, resp.status);
  }
  return body;
}

export class AnnotationApi {
  constructor(readonly base: string = "") {}

  private async post(path: string, payload: unknown): Promise<any> {
    const resp = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return check(resp);
  }

  private async get(path: string): Promise<any> {
    return check(await fetch(this.base + path));
  }

  async registerWorker(name: string): Promise<string> {
    const body = await this.post("/api/workers", { name });
    return body.worker_id;
  }

  async nextTask(workerId: string, step?: Step): Promise<TaskView | null> {
    const query = new URLSearchParams({ worker_id: workerId });
    if (step) query.set("step", step);
    const body = await this.get(`/api/tasks/next?${query}`);
    return body.task;
  }

  async submit(workerId: string, taskId: string, body: ResponseBody): Promise<any> {
    return this.post(`/api/tasks/${taskId}/response`, {
      worker_id: workerId,
      body,
    });
  }

  async progress(): Promise<Progress> {
    return this.get("/api/progress");
  }

  async records(): Promise<any[]> {
    const body = await this.get("/api/records");
    return body.records;
  }
}
