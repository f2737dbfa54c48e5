// Wiring: system selector, chat panel with streamed step cards, graph
// explorer fed by tool observations or browse requests, and a node detail
// pane with "ask about this node".
import { getGraph, getNode, getTrace, listSystems } from "./api.js";
import { ChatSession } from "./chatstore.js";
import { GraphView } from "./graphview.js";
import { postChatStream } from "./sse.js";
import { buildScene, sceneFromBrowse } from "./viewmodel.js";
const LAST_TRACE_KEY = "codeatlas.lastTrace";
function el(id) {
    const found = document.getElementById(id);
    if (!found) {
        throw new Error(`missing element #${id}`);
    }
    return found;
}
class App {
    constructor() {
        this.systemSelect = el("system-select");
        this.chatLog = el("chat-log");
        this.chatForm = el("chat-form");
        this.chatInput = el("chat-input");
        this.detailPane = el("detail-pane");
        this.browseButton = el("browse-button");
        this.graphView = new GraphView(el("graph-pane"), {
            onNodeClick: (node) => void this.showDetail(node.id),
        });
        this.session = null;
    }
    async start() {
        const { systems } = await listSystems();
        this.systemSelect.textContent = "";
        for (const system of systems) {
            const option = document.createElement("option");
            option.value = system.id;
            option.textContent = system.built ? system.id : `${system.id} (not built)`;
            this.systemSelect.appendChild(option);
        }
        this.chatForm.addEventListener("submit", (event) => {
            event.preventDefault();
            void this.submitQuestion();
        });
        this.browseButton.addEventListener("click", () => void this.browse());
        await this.restoreLastSession();
    }
    get systemId() {
        return this.systemSelect.value;
    }
    async restoreLastSession() {
        const saved = sessionStorage.getItem(LAST_TRACE_KEY);
        if (!saved) {
            return;
        }
        try {
            const { systemId, traceId } = JSON.parse(saved);
            const trace = await getTrace(systemId, traceId);
            this.session = ChatSession.fromStoredTrace(trace);
            this.chatLog.textContent = "";
            for (const card of this.session.cards) {
                this.renderCard(card);
            }
        }
        catch {
            sessionStorage.removeItem(LAST_TRACE_KEY);
        }
    }
    async submitQuestion() {
        const question = this.chatInput.value.trim();
        if (!question || !this.systemId) {
            return;
        }
        this.chatInput.value = "";
        this.chatLog.textContent = "";
        this.session = new ChatSession(question);
        this.appendQuestionHeader(question);
        await postChatStream(this.systemId, question, (event) => {
            const card = this.session.applyEvent(event);
            if (card) {
                this.renderCard(card);
            }
            if (card?.kind === "step" && card.step.subgraph) {
                this.showSubgraph(card.step.subgraph);
            }
            if (card?.kind === "final" && this.session.traceId) {
                sessionStorage.setItem(LAST_TRACE_KEY, JSON.stringify({ systemId: this.systemId, traceId: this.session.traceId }));
            }
        });
    }
    appendQuestionHeader(question) {
        const header = document.createElement("div");
        header.className = "card question-card";
        header.textContent = question;
        this.chatLog.appendChild(header);
    }
    renderCard(card) {
        if (card.kind === "step") {
            this.chatLog.appendChild(this.stepCard(card.step, card.repaired));
        }
        else if (card.kind === "final") {
            const div = document.createElement("div");
            div.className = "card final-card";
            const badge = card.final.forced ? " (forced)" : "";
            div.innerHTML = "";
            const title = document.createElement("strong");
            title.textContent = `Answer${badge}`;
            const body = document.createElement("p");
            body.textContent = card.final.answer;
            div.append(title, body);
            this.chatLog.appendChild(div);
        }
        else {
            const div = document.createElement("div");
            div.className = "card error-card";
            div.textContent = card.message;
            this.chatLog.appendChild(div);
        }
        this.chatLog.scrollTop = this.chatLog.scrollHeight;
    }
    stepCard(step, repaired) {
        const details = document.createElement("details");
        details.className = "card step-card";
        const summary = document.createElement("summary");
        const action = step.action.type === "tool"
            ? `${step.action.tool} ${JSON.stringify(step.action.args)}`
            : step.action.type;
        summary.textContent = `step ${step.index}: ${action}`;
        if (repaired) {
            const badge = document.createElement("span");
            badge.className = "repair-badge";
            badge.textContent = "repair";
            summary.appendChild(badge);
        }
        details.appendChild(summary);
        if (step.thought) {
            const thought = document.createElement("p");
            thought.className = "thought";
            thought.textContent = step.thought;
            details.appendChild(thought);
        }
        const observation = document.createElement("pre");
        observation.textContent = step.observation;
        details.appendChild(observation);
        if (step.subgraph) {
            const button = document.createElement("button");
            button.type = "button";
            button.textContent = "show subgraph";
            button.addEventListener("click", () => this.showSubgraph(step.subgraph));
            details.appendChild(button);
        }
        return details;
    }
    showSubgraph(payload) {
        this.graphView.render(buildScene(payload));
    }
    async browse() {
        if (!this.systemId) {
            return;
        }
        const page = await getGraph(this.systemId, { limit: 200 });
        this.graphView.render(sceneFromBrowse(page));
    }
    async showDetail(nodeId) {
        const node = await getNode(this.systemId, nodeId);
        this.detailPane.textContent = "";
        const title = document.createElement("h3");
        title.textContent = `[${node.kind}] ${node.name}`;
        const id = document.createElement("code");
        id.textContent = node.id;
        const description = document.createElement("p");
        description.textContent = node.description ?? "(no description)";
        this.detailPane.append(title, id, description);
        if (node.source !== undefined) {
            const source = document.createElement("pre");
            source.className = "source";
            source.textContent = node.source;
            this.detailPane.appendChild(source);
        }
        const ask = document.createElement("button");
        ask.type = "button";
        ask.textContent = "ask about this node";
        ask.addEventListener("click", () => {
            this.chatInput.value = `Tell me about ${node.name} (${node.id}).`;
            this.chatInput.focus();
        });
        this.detailPane.appendChild(ask);
    }
}
new App().start().catch((error) => {
    const log = document.getElementById("chat-log");
    if (log) {
        log.textContent = `failed to start: ${error}`;
    }
});
