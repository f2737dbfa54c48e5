import { test } from "node:test";
import assert from "node:assert/strict";
import { SseParser } from "../src/sse.js";
test("one chunk, several events", () => {
    const parser = new SseParser();
    const events = parser.push('event: step\ndata: {"index": 1}\n\nevent: final\ndata: {"answer": "a"}\n\n');
    assert.deepEqual(events.map((e) => e.type), ["step", "final"]);
    assert.deepEqual(events[0].data, { index: 1 });
});
test("frames split across arbitrary chunk boundaries", () => {
    const stream = 'event: step\ndata: {"index": 1}\n\nevent: step\ndata: {"index": 2}\n\n';
    for (let cut = 1; cut < stream.length - 1; cut++) {
        const parser = new SseParser();
        const events = [
            ...parser.push(stream.slice(0, cut)),
            ...parser.push(stream.slice(cut)),
            ...parser.end(),
        ];
        assert.deepEqual(events.map((e) => e.data.index), [1, 2], `cut at ${cut}`);
    }
});
test("unterminated final frame is flushed by end()", () => {
    const parser = new SseParser();
    assert.deepEqual(parser.push('event: final\ndata: {"answer": "x"}'), []);
    const events = parser.end();
    assert.equal(events.length, 1);
    assert.equal(events[0].type, "final");
});
test("unknown event types are ignored", () => {
    const parser = new SseParser();
    const events = parser.push("event: heartbeat\ndata: {}\n\n");
    assert.deepEqual(events, []);
});
test("bad JSON data degrades to an error event", () => {
    const parser = new SseParser();
    const events = parser.push("event: step\ndata: {nope\n\n");
    assert.equal(events[0].type, "error");
});
