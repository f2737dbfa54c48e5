// Chat session state: the ordered list of cards shown in the panel.
//
// Cards built from live stream events must equal cards rebuilt from the
// stored trace; that equivalence is what makes reload-after-disconnect
// lossless, and it is asserted in the tests.
export class ChatSession {
    constructor(question) {
        this.cards = [];
        this.traceId = null;
        this.done = false;
        this.question = question;
    }
    applyEvent(event) {
        if (event.type === "step") {
            const step = event.data;
            const card = { kind: "step", step, repaired: step.repairs.length > 0 };
            this.cards.push(card);
            return card;
        }
        if (event.type === "final") {
            const final = event.data;
            const card = { kind: "final", final };
            this.cards.push(card);
            this.traceId = final.trace_id;
            this.done = true;
            return card;
        }
        const message = event.data?.message ?? "stream error";
        const card = { kind: "error", message };
        this.cards.push(card);
        this.done = true;
        return card;
    }
    static fromStoredTrace(trace) {
        const session = new ChatSession(trace.final.question);
        for (const step of trace.steps) {
            session.applyEvent({ type: "step", data: step });
        }
        session.applyEvent({ type: "final", data: trace.final });
        return session;
    }
    stepCards() {
        return this.cards.filter((c) => c.kind === "step");
    }
}
