// Chat session state: the ordered list of cards shown in the panel.
//
// Cards built from live stream events must equal cards rebuilt from the
// stored trace; that equivalence is what makes reload-after-disconnect
// lossless, and it is asserted in the tests.

import type {
  ChatStreamEvent,
  StoredTrace,
  TraceFinalRecord,
  TraceStepRecord,
} from "./types.js";

export type ChatCard =
  | { kind: "step"; step: TraceStepRecord; repaired: boolean }
  | { kind: "final"; final: TraceFinalRecord }
  | { kind: "error"; message: string };

export class ChatSession {
  readonly question: string;
  cards: ChatCard[] = [];
  traceId: string | null = null;
  done = false;

  constructor(question: string) {
    this.question = question;
  }

  applyEvent(event: ChatStreamEvent): ChatCard | null {
    if (event.type === "step") {
      const step = event.data as TraceStepRecord;
      const card: ChatCard = { kind: "step", step, repaired: step.repairs.length > 0 };
      this.cards.push(card);
      return card;
    }
    if (event.type === "final") {
      const final = event.data as TraceFinalRecord;
      const card: ChatCard = { kind: "final", final };
      this.cards.push(card);
      this.traceId = final.trace_id;
      this.done = true;
      return card;
    }
    const message = (event.data as { message?: string })?.message ?? "stream error";
    const card: ChatCard = { kind: "error", message };
    this.cards.push(card);
    this.done = true;
    return card;
  }

  static fromStoredTrace(trace: StoredTrace): ChatSession {
    const session = new ChatSession(trace.final.question);
    for (const step of trace.steps) {
      session.applyEvent({ type: "step", data: step });
    }
    session.applyEvent({ type: "final", data: trace.final });
    return session;
  }

  stepCards(): ChatCard[] {
    return this.cards.filter((c) => c.kind === "step");
  }
}
