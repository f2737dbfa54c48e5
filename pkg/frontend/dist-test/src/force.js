// Minimal force-directed layout: pairwise repulsion, springs along edges,
// gentle centering. Positions are intentionally untested; tests only assert
// set equality of rendered elements, never geometry.
function seedPosition(id, width, height) {
    let hash = 2166136261;
    for (let i = 0; i < id.length; i++) {
        hash = (hash ^ id.charCodeAt(i)) >>> 0;
        hash = (hash * 16777619) >>> 0;
    }
    const angle = ((hash % 3600) / 3600) * 2 * Math.PI;
    const radius = 60 + (hash % 140);
    return {
        x: width / 2 + radius * Math.cos(angle),
        y: height / 2 + radius * Math.sin(angle),
    };
}
export function computeLayout(scene, width, height, iterations = 250) {
    const points = new Map();
    for (const node of scene.nodes) {
        points.set(node.id, seedPosition(node.id, width, height));
    }
    const ids = scene.nodes.map((n) => n.id);
    const springLength = Math.min(width, height) / Math.max(2, Math.sqrt(ids.length));
    for (let step = 0; step < iterations; step++) {
        const force = new Map(ids.map((id) => [id, { x: 0, y: 0 }]));
        for (let i = 0; i < ids.length; i++) {
            for (let j = i + 1; j < ids.length; j++) {
                const a = points.get(ids[i]);
                const b = points.get(ids[j]);
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                const distSq = Math.max(dx * dx + dy * dy, 1);
                const dist = Math.sqrt(distSq);
                const repulsion = (springLength * springLength) / distSq;
                dx = (dx / dist) * repulsion * 40;
                dy = (dy / dist) * repulsion * 40;
                force.get(ids[i]).x += dx;
                force.get(ids[i]).y += dy;
                force.get(ids[j]).x -= dx;
                force.get(ids[j]).y -= dy;
            }
        }
        for (const edge of scene.edges) {
            const a = points.get(edge.src);
            const b = points.get(edge.dst);
            if (!a || !b || edge.src === edge.dst) {
                continue;
            }
            const dx = b.x - a.x;
            const dy = b.y - a.y;
            const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
            const pull = ((dist - springLength) / dist) * 0.05;
            force.get(edge.src).x += dx * pull;
            force.get(edge.src).y += dy * pull;
            force.get(edge.dst).x -= dx * pull;
            force.get(edge.dst).y -= dy * pull;
        }
        const cooling = 1 - step / iterations;
        for (const id of ids) {
            const point = points.get(id);
            const f = force.get(id);
            f.x += (width / 2 - point.x) * 0.01;
            f.y += (height / 2 - point.y) * 0.01;
            point.x += Math.max(-12, Math.min(12, f.x)) * cooling;
            point.y += Math.max(-12, Math.min(12, f.y)) * cooling;
            point.x = Math.max(30, Math.min(width - 30, point.x));
            point.y = Math.max(24, Math.min(height - 24, point.y));
        }
    }
    return points;
}
