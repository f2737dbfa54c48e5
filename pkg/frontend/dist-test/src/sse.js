// Incremental parser for text/event-stream payloads, plus a POST-based
// chat stream consumer. EventSource cannot POST, so the stream is read from
// fetch's ReadableStream and fed through the parser chunk by chunk.
export class SseParser {
    constructor() {
        this.buffer = "";
    }
    /** Feed one chunk; returns every complete event it closed off. */
    push(chunk) {
        this.buffer += chunk;
        const events = [];
        let idx;
        while ((idx = this.buffer.indexOf("\n\n")) >= 0) {
            const block = this.buffer.slice(0, idx);
            this.buffer = this.buffer.slice(idx + 2);
            const event = parseBlock(block);
            if (event) {
                events.push(event);
            }
        }
        return events;
    }
    /** Flush a trailing block that was not double-newline terminated. */
    end() {
        const block = this.buffer;
        this.buffer = "";
        const event = block.trim() ? parseBlock(block) : null;
        return event ? [event] : [];
    }
}
function parseBlock(block) {
    let eventType = null;
    const dataLines = [];
    for (const line of block.split("\n")) {
        if (line.startsWith("event: ")) {
            eventType = line.slice("event: ".length).trim();
        }
        else if (line.startsWith("data: ")) {
            dataLines.push(line.slice("data: ".length));
        }
    }
    if (eventType !== "step" && eventType !== "final" && eventType !== "error") {
        return null;
    }
    let data = null;
    if (dataLines.length) {
        try {
            data = JSON.parse(dataLines.join("\n"));
        }
        catch {
            return { type: "error", data: { message: "unparseable event data" } };
        }
    }
    return { type: eventType, data };
}
export async function postChatStream(systemId, question, onEvent) {
    const response = await fetch(`/api/systems/${encodeURIComponent(systemId)}/chat`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ question }),
    });
    if (!response.ok || !response.body) {
        const text = await response.text();
        onEvent({ type: "error", data: { message: `chat failed (${response.status}): ${text}` } });
        return;
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    for (;;) {
        const { done, value } = await reader.read();
        if (done) {
            break;
        }
        for (const event of parser.push(decoder.decode(value, { stream: true }))) {
            onEvent(event);
        }
    }
    for (const event of parser.end()) {
        onEvent(event);
    }
}
