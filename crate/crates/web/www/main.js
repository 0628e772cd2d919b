import init, { quiver, torus, normalize } from "./pkg/grpquiv_web.js";

const $ = (id) => document.getElementById(id);

function show(out, fn) {
  out.classList.remove("error");
  try {
    return fn();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
    return null;
  }
}

function drawQuiver(svg, q) {
  const r = 180;
  const pos = (v) => {
    const a = (2 * Math.PI * v) / q.p - Math.PI / 2;
    return [r * Math.cos(a), r * Math.sin(a)];
  };
  const parts = [
    '<defs><marker id="tip" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">' +
      '<path d="M0,0 L10,5 L0,10 z" fill="#555"/></marker></defs>',
  ];
  for (const [x, y] of q.edges) {
    const [x1, y1] = pos(x);
    const [x2, y2] = pos(y);
    if (x === y) {
      parts.push(`<circle cx="${x1 * 1.08}" cy="${y1 * 1.08}" r="9" fill="none" stroke="#999"/>`);
    } else {
      parts.push(`<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="#555" marker-end="url(#tip)"/>`);
    }
  }
  const label = q.p <= 60;
  for (let v = 0; v < q.p; v++) {
    const [x, y] = pos(v);
    parts.push(`<circle cx="${x}" cy="${y}" r="4" fill="#1f5fa8"/>`);
    if (label) parts.push(`<text x="${x * 1.15}" y="${y * 1.15 + 4}" font-size="11" text-anchor="middle">${v}</text>`);
  }
  svg.innerHTML = parts.join("");
}

function runQuiver() {
  const out = $("q-out");
  const q = show(out, () => JSON.parse(quiver(+$("q-p").value, +$("q-n").value, +$("q-m").value)));
  if (!q) return;
  const lines = [
    `Q_{${q.n},${q.m}}(Z_${q.p}): ${q.p} vertices, ${q.edges.length} edges`,
    `sinkless: ${q.sinkless}, sourceless: ${q.sourceless}`,
    q.decomposition ? `algebra: ${q.decomposition}` : "algebra: n and m are not both units, no cycle decomposition",
  ];
  out.textContent = lines.join("\n");
  drawQuiver($("q-svg"), q);
}

function runTorus() {
  const out = $("t-out");
  const r = show(out, () =>
    JSON.parse(torus($("t-f").value, $("t-g").value, $("t-x").value, +$("t-s").value, +$("t-seed").value)),
  );
  if (!r) return;
  const pts = r.fiber.map((y) => "  (" + y.map((t) => t.toFixed(6)).join(", ") + ")");
  out.textContent = [
    `reduced F = diag(${r.a.join(", ")}), G rows = ${JSON.stringify(r.G)}`,
    `fiber (${r.fiber.length} points):`,
    ...pts,
    `orthonormality defect: ${r.orth_defect.toExponential(3)}`,
    `reconstruction defect: ${r.recon_defect.toExponential(3)}`,
    r.passed ? "basis check: PASS" : "basis check: FAIL",
  ].join("\n");
}

function runNormalize() {
  const out = $("n-out");
  const r = show(out, () => JSON.parse(normalize($("n-f").value, $("n-g").value, $("n-w").value)));
  if (!r) return;
  out.textContent = [`in ${r.algebra}`, `normal form: ${r.text}`, `gauge-invariant part: ${r.expectation}`].join("\n");
}

await init();
$("q-go").onclick = runQuiver;
$("t-go").onclick = runTorus;
$("n-go").onclick = runNormalize;
runQuiver();
runTorus();
runNormalize();
