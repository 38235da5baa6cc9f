"""Local stand-in for the crowdsourcing workflow.

Three task queues (write a question, validate a question, paraphrase a
question triple) with fixed quorums of 3/3/2 responses. Aggregation runs
exactly once when a task reaches quorum and drives the per-sentence pipeline
forward: write -> validate each question -> paraphrase the approved triple
-> final record. State is an append-only event log replayed on startup;
leases are the only thing lost on restart.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable

from .dataset import (
    STEP1_ACCEPTED,
    STEP1_NA,
    STEP1_RERUN,
    STEP2_APPROVED,
    STEP2_EXPERT_REVIEW,
    STEP2_REJECTED,
    GENERATED_PER_RECORD,
    NA_LABEL,
    QuestionRecord,
    ValidationVerdict,
    aggregate_step1,
    aggregate_step2,
    assemble_record,
)

WRITE_QUESTION = "WRITE_QUESTION"
VALIDATE = "VALIDATE"
PARAPHRASE = "PARAPHRASE"
STEPS = (WRITE_QUESTION, VALIDATE, PARAPHRASE)

QUORUM = {WRITE_QUESTION: 3, VALIDATE: 3, PARAPHRASE: 2}

OPEN = "OPEN"
LEASED = "LEASED"
QUORUM_REACHED = "QUORUM_REACHED"
CLOSED = "CLOSED"
RERUN_SPAWNED = "RERUN_SPAWNED"

LOG_FORMAT = "usageq-annotation-log"
LOG_VERSION = 1


class AnnotationError(Exception):
    pass


class UnknownWorkerError(AnnotationError):
    pass


class StaleLeaseError(AnnotationError):
    pass


class DuplicateResponseError(AnnotationError):
    pass


class BodyMismatchError(AnnotationError):
    pass


@dataclass
class WorkerResponse:
    worker_id: str
    task_id: str
    body: Any  # question text | "N/A" | verdict dict | paraphrase text
    submitted_at: float


@dataclass
class AnnotationTask:
    task_id: str
    step: str
    payload: dict
    state: str = OPEN
    responses: list[WorkerResponse] = field(default_factory=list)
    excluded_workers: set[str] = field(default_factory=set)
    lease_worker: str | None = None
    lease_expires: float = 0.0
    decision: str | None = None

    @property
    def quorum(self) -> int:
        return QUORUM[self.step]

    def responders(self) -> set[str]:
        return {r.worker_id for r in self.responses}

    def view(self) -> dict:
        return {
            "task_id": self.task_id,
            "step": self.step,
            "payload": self.payload,
            "state": self.state,
            "n_responses": len(self.responses),
            "quorum": self.quorum,
        }


@dataclass
class RecordPipeline:
    record_id: str
    category: str
    sentence: str
    approved: list[tuple[str, str]] = field(default_factory=list)  # (question, author)
    pending_validate: int = 0
    pending_write: int = 0
    pending_expert: int = 0
    paraphrase_spawned: bool = False
    write_workers: set[str] = field(default_factory=set)
    final: QuestionRecord | None = None


@dataclass
class ExpertItem:
    item_id: str
    record_id: str
    task_id: str
    question: str
    author: str
    verdicts: list[dict]
    resolved: bool = False
    approved: bool | None = None


class AnnotationService:
    """Thread-safe task queue with quorum aggregation and crash recovery."""

    def __init__(
        self,
        log_path: str | Path | None = None,
        lease_seconds: float = 300.0,
        clock: Callable[[], float] = time.time,
    ):
        self.lease_seconds = lease_seconds
        self.clock = clock
        self._lock = threading.RLock()
        self._tasks: dict[str, AnnotationTask] = {}
        self._pipelines: dict[str, RecordPipeline] = {}
        self._workers: dict[str, str] = {}  # name -> worker_id
        self._worker_names: dict[str, str] = {}  # worker_id -> name
        self._expert: dict[str, ExpertItem] = {}
        self._records: list[QuestionRecord] = []
        self._task_seq = 0
        self._expert_seq = 0
        self._log_path = Path(log_path) if log_path else None
        self._log_fh = None
        self._replaying = False
        if self._log_path is not None:
            if self._log_path.exists() and self._log_path.stat().st_size > 0:
                self._replay_log()
            self._log_fh = open(self._log_path, "a", encoding="utf-8")
            if self._log_path.stat().st_size == 0:
                self._append_log({"ev": "header", "format": LOG_FORMAT, "version": LOG_VERSION})

    # ---------------------------------------------------------------- log

    def _append_log(self, event: dict) -> None:
        if self._log_fh is None or self._replaying:
            return
        self._log_fh.write(json.dumps(event, ensure_ascii=False) + "\n")
        self._log_fh.flush()

    def _replay_log(self) -> None:
        self._replaying = True
        try:
            with open(self._log_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    event = json.loads(line)
                    kind = event.get("ev")
                    if kind == "header":
                        if event.get("format") != LOG_FORMAT:
                            raise AnnotationError(f"not an annotation log: {self._log_path}")
                        continue
                    if kind == "register":
                        self.register_worker(event["name"])
                    elif kind == "batch":
                        self.create_batch(event["step"], event["inputs"])
                    elif kind == "response":
                        self._apply_response(
                            event["worker_id"], event["task_id"], event["body"], event["at"]
                        )
                    elif kind == "expert":
                        self.resolve_expert(event["item_id"], event["approve"])
        finally:
            self._replaying = False

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None

    # ------------------------------------------------------------ workers

    def register_worker(self, name: str) -> str:
        with self._lock:
            if name in self._workers:
                return self._workers[name]
            worker_id = f"w{len(self._workers) + 1:03d}"
            self._workers[name] = worker_id
            self._worker_names[worker_id] = name
            self._append_log({"ev": "register", "name": name, "worker_id": worker_id})
            return worker_id

    def _require_worker(self, worker_id: str) -> None:
        if worker_id not in self._worker_names:
            raise UnknownWorkerError(f"worker {worker_id!r} is not registered")

    # -------------------------------------------------------------- tasks

    def _new_task(self, step: str, payload: dict, excluded: set[str] | None = None) -> AnnotationTask:
        self._task_seq += 1
        task = AnnotationTask(
            task_id=f"t{self._task_seq:05d}",
            step=step,
            payload=payload,
            excluded_workers=set(excluded or ()),
        )
        self._tasks[task.task_id] = task
        return task

    def create_batch(self, step: str, inputs: list[dict]) -> list[AnnotationTask]:
        """One OPEN task per input; write batches also open a record pipeline."""
        if step not in STEPS:
            raise AnnotationError(f"unknown step {step!r}")
        if not inputs:
            raise AnnotationError("cannot create an empty batch")
        with self._lock:
            tasks = []
            for payload in inputs:
                payload = dict(payload)
                if step == WRITE_QUESTION:
                    missing = {"record_id", "category", "sentence"} - payload.keys()
                    if missing:
                        raise AnnotationError(f"write input missing fields {sorted(missing)}")
                    pipe = self._pipelines.get(payload["record_id"])
                    if pipe is None:
                        self._pipelines[payload["record_id"]] = RecordPipeline(
                            payload["record_id"], payload["category"], payload["sentence"],
                            pending_write=1,
                        )
                    else:
                        pipe.pending_write += 1
                elif step == VALIDATE:
                    question = payload.get("question", "")
                    if not question or question == NA_LABEL:
                        raise AnnotationError(
                            "nothing to validate: step-1 result was N/A or empty"
                        )
                elif step == PARAPHRASE:
                    questions = payload.get("questions") or []
                    if len(questions) != GENERATED_PER_RECORD:
                        raise AnnotationError(
                            f"paraphrase input needs the full question triple, got {len(questions)}"
                        )
                tasks.append(self._new_task(step, payload))
            self._append_log({"ev": "batch", "step": step, "inputs": inputs})
            return tasks

    def _expire_leases(self) -> None:
        now = self.clock()
        for task in self._tasks.values():
            if task.state == LEASED and task.lease_expires <= now:
                task.state = OPEN
                task.lease_worker = None

    def next_task(self, worker_id: str, step: str | None = None) -> AnnotationTask | None:
        """Lease the first open task this worker may answer, or None.

        A worker holding a live lease gets that task back first (resume after
        a page reload) instead of stranding it until expiry.
        """
        with self._lock:
            self._require_worker(worker_id)
            self._expire_leases()
            for task in self._tasks.values():
                if (
                    task.state == LEASED
                    and task.lease_worker == worker_id
                    and (step is None or task.step == step)
                ):
                    task.lease_expires = self.clock() + self.lease_seconds
                    return task
            for task in self._tasks.values():
                if task.state != OPEN:
                    continue
                if step is not None and task.step != step:
                    continue
                if worker_id in task.excluded_workers or worker_id in task.responders():
                    continue
                task.state = LEASED
                task.lease_worker = worker_id
                task.lease_expires = self.clock() + self.lease_seconds
                return task
            return None

    # ------------------------------------------------------------- submit

    def _check_body(self, step: str, body: Any) -> Any:
        if step in (WRITE_QUESTION, PARAPHRASE):
            if not isinstance(body, str) or not body.strip():
                raise BodyMismatchError(f"{step} expects a non-empty text body")
            body = body.strip()
            if step == PARAPHRASE and body == NA_LABEL:
                raise BodyMismatchError("paraphrase tasks cannot be answered with N/A")
            if body != NA_LABEL and not body.endswith("?"):
                raise BodyMismatchError("questions must end with '?'")
            return body
        if not isinstance(body, dict):
            raise BodyMismatchError("VALIDATE expects a verdict object")
        try:
            ValidationVerdict(
                grammatical=bool(body["grammatical"]),
                yesno_answerable=bool(body["yesno_answerable"]),
                mentions_usage=bool(body["mentions_usage"]),
                asker=body["asker"],
            )
        except (KeyError, ValueError) as exc:
            raise BodyMismatchError(f"bad verdict: {exc}")
        return body

    def submit(self, worker_id: str, task_id: str, body: Any) -> dict:
        """Record a response under a live lease; aggregate at quorum."""
        with self._lock:
            self._require_worker(worker_id)
            task = self._tasks.get(task_id)
            if task is None:
                raise AnnotationError(f"no such task {task_id!r}")
            self._expire_leases()
            if task.state != LEASED or task.lease_worker != worker_id:
                raise StaleLeaseError(f"worker {worker_id} holds no lease on {task_id}")
            if worker_id in task.responders():
                raise DuplicateResponseError(f"worker {worker_id} already answered {task_id}")
            body = self._check_body(task.step, body)
            at = self.clock()
            self._append_log(
                {"ev": "response", "task_id": task_id, "worker_id": worker_id,
                 "body": body, "at": at}
            )
            return self._apply_response(worker_id, task_id, body, at)

    def _apply_response(self, worker_id: str, task_id: str, body: Any, at: float) -> dict:
        task = self._tasks[task_id]
        if worker_id in task.responders():
            raise DuplicateResponseError(f"worker {worker_id} already answered {task_id}")
        body = self._check_body(task.step, body)
        task.responses.append(WorkerResponse(worker_id, task_id, body, at))
        task.lease_worker = None
        events: list[str] = []
        if len(task.responses) >= task.quorum:
            task.state = QUORUM_REACHED
            self._aggregate(task, events)
        else:
            task.state = OPEN
        return {"task_id": task_id, "state": task.state, "events": events}

    # -------------------------------------------------------- aggregation

    def _aggregate(self, task: AnnotationTask, events: list[str]) -> None:
        if task.step == WRITE_QUESTION:
            self._aggregate_write(task, events)
        elif task.step == VALIDATE:
            self._aggregate_validate(task, events)
        else:
            self._aggregate_paraphrase(task, events)

    def _pipeline(self, task: AnnotationTask) -> RecordPipeline | None:
        return self._pipelines.get(task.payload.get("record_id", ""))

    def _aggregate_write(self, task: AnnotationTask, events: list[str]) -> None:
        answers = [r.body for r in task.responses]
        decision, questions = aggregate_step1(answers)
        pipe = self._pipeline(task)
        if pipe is not None:
            pipe.write_workers |= task.responders()
            pipe.pending_write -= 1
        if decision == STEP1_RERUN:
            task.state = RERUN_SPAWNED
            task.decision = STEP1_RERUN
            rerun = self._new_task(
                WRITE_QUESTION,
                dict(task.payload),
                excluded=task.excluded_workers | task.responders(),
            )
            if pipe is not None:
                pipe.pending_write += 1
            events.append(f"rerun_spawned:{rerun.task_id}")
            return
        task.state = CLOSED
        task.decision = decision
        if decision == STEP1_NA:
            events.append("closed:N/A")
            if pipe is not None and pipe.final is None:
                pipe.final = assemble_record(
                    pipe.record_id, pipe.category, pipe.sentence, na=True
                )
                self._records.append(pipe.final)
                events.append(f"record_assembled:{pipe.record_id}")
            return
        events.append("closed:questions")
        if pipe is None:
            return
        authors = [r.worker_id for r in task.responses]
        for question, author in zip(questions, authors):
            vt = self._new_task(
                VALIDATE,
                {
                    "record_id": pipe.record_id,
                    "category": pipe.category,
                    "question": question,
                    "author": author,
                },
                excluded={author},
            )
            pipe.pending_validate += 1
            events.append(f"validate_spawned:{vt.task_id}")

    def _aggregate_validate(self, task: AnnotationTask, events: list[str]) -> None:
        verdicts = [
            ValidationVerdict(
                grammatical=bool(r.body["grammatical"]),
                yesno_answerable=bool(r.body["yesno_answerable"]),
                mentions_usage=bool(r.body["mentions_usage"]),
                asker=r.body["asker"],
            )
            for r in task.responses
        ]
        outcome = aggregate_step2(verdicts)
        task.state = CLOSED
        task.decision = outcome
        events.append(f"closed:{outcome}")
        pipe = self._pipeline(task)
        if pipe is None:
            return
        pipe.pending_validate -= 1
        question = task.payload["question"]
        author = task.payload.get("author", "")
        if outcome == STEP2_APPROVED:
            pipe.approved.append((question, author))
        elif outcome == STEP2_EXPERT_REVIEW:
            self._expert_seq += 1
            item = ExpertItem(
                item_id=f"x{self._expert_seq:04d}",
                record_id=pipe.record_id,
                task_id=task.task_id,
                question=question,
                author=author,
                verdicts=[dict(r.body) for r in task.responses],
            )
            self._expert[item.item_id] = item
            pipe.pending_expert += 1
            events.append(f"expert_enqueued:{item.item_id}")
            return
        self._advance(pipe, events)

    def _aggregate_paraphrase(self, task: AnnotationTask, events: list[str]) -> None:
        task.state = CLOSED
        task.decision = "PARAPHRASED"
        events.append("closed:paraphrases")
        pipe = self._pipeline(task)
        if pipe is None or pipe.final is not None:
            return
        paraphrases = [r.body for r in task.responses]
        triple = list(task.payload["questions"])
        pipe.final = assemble_record(
            pipe.record_id, pipe.category, pipe.sentence,
            questions=triple, paraphrases=paraphrases,
        )
        self._records.append(pipe.final)
        events.append(f"record_assembled:{pipe.record_id}")

    def _advance(self, pipe: RecordPipeline, events: list[str]) -> None:
        """Spawn the paraphrase task or a replacement write round as needed."""
        if pipe.final is not None:
            return
        if len(pipe.approved) >= GENERATED_PER_RECORD:
            if not pipe.paraphrase_spawned:
                pipe.paraphrase_spawned = True
                authors = {a for _, a in pipe.approved[:GENERATED_PER_RECORD]}
                pt = self._new_task(
                    PARAPHRASE,
                    {
                        "record_id": pipe.record_id,
                        "category": pipe.category,
                        "questions": [q for q, _ in pipe.approved[:GENERATED_PER_RECORD]],
                    },
                    excluded=authors,
                )
                events.append(f"paraphrase_spawned:{pt.task_id}")
            return
        if pipe.pending_validate == 0 and pipe.pending_write == 0 and pipe.pending_expert == 0:
            wt = self._new_task(
                WRITE_QUESTION,
                {
                    "record_id": pipe.record_id,
                    "category": pipe.category,
                    "sentence": pipe.sentence,
                },
                excluded=set(pipe.write_workers),
            )
            pipe.pending_write += 1
            events.append(f"write_requeued:{wt.task_id}")

    # -------------------------------------------------------------- expert

    def expert_queue(self) -> list[ExpertItem]:
        with self._lock:
            return [i for i in self._expert.values() if not i.resolved]

    def resolve_expert(self, item_id: str, approve: bool) -> dict:
        """Record the expert's call and feed it back into the pipeline."""
        with self._lock:
            item = self._expert.get(item_id)
            if item is None:
                raise AnnotationError(f"no such expert item {item_id!r}")
            if item.resolved:
                raise AnnotationError(f"expert item {item_id} already resolved")
            self._append_log({"ev": "expert", "item_id": item_id, "approve": approve})
            item.resolved = True
            item.approved = approve
            events: list[str] = []
            pipe = self._pipelines.get(item.record_id)
            if pipe is not None:
                pipe.pending_expert -= 1
                if approve:
                    pipe.approved.append((item.question, item.author))
                self._advance(pipe, events)
            return {"item_id": item_id, "approved": approve, "events": events}

    # ------------------------------------------------------------- status

    def progress(self) -> dict:
        """Per-step state counts; the five task states sum to the step total."""
        with self._lock:
            self._expire_leases()
            out = {}
            for step in STEPS:
                counts = {
                    "open": 0, "leased": 0, "quorum_reached": 0,
                    "closed": 0, "rerun": 0, "expert_queue": 0,
                }
                for task in self._tasks.values():
                    if task.step != step:
                        continue
                    key = {
                        OPEN: "open", LEASED: "leased", QUORUM_REACHED: "quorum_reached",
                        CLOSED: "closed", RERUN_SPAWNED: "rerun",
                    }[task.state]
                    counts[key] += 1
                out[step] = counts
            out[VALIDATE]["expert_queue"] = sum(
                1 for i in self._expert.values() if not i.resolved
            )
            out["records_done"] = len(self._records)
            return out

    def records(self) -> list[QuestionRecord]:
        with self._lock:
            return list(self._records)

    def tasks(self) -> list[AnnotationTask]:
        with self._lock:
            return list(self._tasks.values())


def write_batch_from_candidates(
    service: AnnotationService, rows: Iterable[dict]
) -> list[AnnotationTask]:
    """Open the step-1 queue from candidate-file rows."""
    inputs = [
        {
            "record_id": f"{r['review_id']}:{r['sentence_index']}",
            "category": r["category"],
            "sentence": r["text"],
        }
        for r in rows
    ]
    return service.create_batch(WRITE_QUESTION, inputs)
