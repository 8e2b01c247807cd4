import init, { fixtureList, fixtureHda, check, pvBoard, gridEmbedding } from "./pkg/sculpt_web.js";

const TWO_MUTEX = `# two processes taking two locks in opposite order
P(a) P(b) V(b) V(a)
P(b) P(a) V(a) V(b)
`;
const SVG = "http://www.w3.org/2000/svg";
const $ = (id) => document.getElementById(id);

function el(name, attrs, parent) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (parent) parent.appendChild(e);
  return e;
}

function clear(node) {
  while (node.firstChild) node.removeChild(node.firstChild);
}

function fail(out, e) {
  out.innerHTML = "";
  const p = document.createElement("div");
  p.className = "err";
  p.textContent = String(e.message ?? e);
  out.appendChild(p);
}

function verdictLine(v) {
  const span = document.createElement("div");
  span.className = v.sculptable ? "yes" : "no";
  span.textContent = v.sculptable ? `sculptable in B^${v.d}` : `not sculptable: ${v.witness.kind}`;
  return span;
}

function runCheck() {
  const out = $("check-out");
  try {
    const r = JSON.parse(check($("hda").value, $("oracle").checked));
    out.innerHTML = "";
    out.appendChild(verdictLine(r.verdict));
    const info = document.createElement("div");
    info.textContent = `cells by dimension ${r.cells.join(" / ")}, ${r.events} universal events`;
    out.appendChild(info);
    if (r.verdict.sculptable) {
      const t = document.createElement("table");
      for (const [id, tuple] of Object.entries(r.verdict.embedding)) {
        const row = t.insertRow();
        row.insertCell().textContent = id;
        row.insertCell().textContent = tuple;
      }
      out.appendChild(t);
    } else {
      const pre = document.createElement("div");
      pre.textContent = JSON.stringify(r.verdict.witness, null, 2);
      out.appendChild(pre);
    }
  } catch (e) {
    fail(out, e);
  }
}

function loadFixture() {
  $("hda").value = fixtureHda($("fixture").value);
  $("check-out").innerHTML = "";
}

// Lays cells with extents `x`, `y` out on `svg`, y growing upwards.
function layout(svg, sizes) {
  const w = +svg.getAttribute("width"), h = +svg.getAttribute("height");
  const [m, n] = [sizes[0], sizes[1] ?? 0];
  const unit = Math.min((w - 40) / m, n ? (h - 40) / n : Infinity);
  const px = (x) => 20 + x * unit;
  const py = (y) => h - 20 - y * unit;
  return { unit, px, py };
}

function hatch(svg) {
  const defs = el("defs", {}, svg);
  const p = el("pattern", { id: "hatch", width: 6, height: 6, patternUnits: "userSpaceOnUse", patternTransform: "rotate(45)" }, defs);
  el("line", { x1: 0, y1: 0, x2: 0, y2: 6, stroke: "#bbb", "stroke-width": 2 }, p);
}

function drawBoard(r) {
  const svg = $("board");
  clear(svg);
  hatch(svg);
  const { px, py } = layout(svg, r.sizes);
  const byDim = [0, 1, 2].map((d) => r.cells.filter((c) => c.dim === d));
  for (const c of byDim[2]) {
    const fill = !c.allowed ? "#999" : c.reachable ? "#cfe3f7" : "url(#hatch)";
    el("rect", { x: px(c.x[0]), y: py(c.y[1]), width: px(c.x[1]) - px(c.x[0]), height: py(c.y[0]) - py(c.y[1]), fill }, svg);
  }
  for (const c of byDim[1]) {
    const stroke = !c.allowed ? "#999" : "#245";
    const attrs = { x1: px(c.x[0]), y1: py(c.y[0]), x2: px(c.x[1]), y2: py(c.y[1]), stroke, "stroke-width": c.allowed ? 2 : 1 };
    if (c.allowed && !c.reachable) attrs["stroke-dasharray"] = "4 3";
    el("line", attrs, svg);
  }
  for (const c of byDim[0]) {
    if (!c.allowed) continue;
    el("circle", { cx: px(c.x[0]), cy: py(c.y[0]), r: 4, fill: c.reachable ? "#245" : "#fff", stroke: "#245" }, svg);
  }
}

function runPv() {
  const out = $("pv-out");
  try {
    const r = JSON.parse(pvBoard($("program").value));
    drawBoard(r);
    out.innerHTML = "";
    out.appendChild(verdictLine(r.verdict));
    const info = document.createElement("div");
    const total = r.sizes[0] * r.sizes[1];
    const unreachable = r.cells.filter((c) => c.allowed && !c.reachable).map((c) => c.id);
    info.textContent = `resources ${r.resources.join(", ")}\n${total} - ${total - r.squares} = ${r.squares} squares\nunreachable: ${unreachable.join(" ") || "none"}`;
    out.appendChild(info);
  } catch (e) {
    clear($("board"));
    fail(out, e);
  }
}

function runGrid() {
  const svg = $("grid-svg");
  const label = $("grid-cell");
  clear(svg);
  try {
    const r = JSON.parse(gridEmbedding($("sizes").value));
    const { px, py } = layout(svg, r.sizes);
    label.textContent = `B^${r.d}`;
    const show = (c) => () => (label.textContent = `${c.id}  ↦  ${c.tuple}`);
    const order = [2, 1, 0];
    for (const d of order) {
      for (const c of r.cells.filter((c) => c.dim === d)) {
        let shape;
        if (d === 2) {
          shape = el("rect", { x: px(c.x[0]), y: py(c.y[1]), width: px(c.x[1]) - px(c.x[0]), height: py(c.y[0]) - py(c.y[1]), fill: "#e4eef8", stroke: "#fff" }, svg);
        } else if (d === 1) {
          shape = el("line", { x1: px(c.x[0]), y1: py(c.y[0]), x2: px(c.x[1]), y2: py(c.y[1]), stroke: "#245", "stroke-width": 5 }, svg);
        } else {
          shape = el("circle", { cx: px(c.x[0]), cy: py(c.y[0]), r: 6, fill: "#245" }, svg);
        }
        shape.addEventListener("mouseenter", show(c));
        const t = el("title", {}, shape);
        t.textContent = c.tuple;
      }
    }
  } catch (e) {
    label.textContent = String(e.message ?? e);
  }
}

await init();
const select = $("fixture");
for (const f of JSON.parse(fixtureList())) {
  const o = document.createElement("option");
  o.value = f.name;
  o.textContent = `${f.name}: ${f.description} (${f.expected})`;
  select.appendChild(o);
}
select.addEventListener("change", loadFixture);
$("run-check").addEventListener("click", runCheck);
$("run-pv").addEventListener("click", runPv);
$("run-grid").addEventListener("click", runGrid);
$("program").value = TWO_MUTEX;
select.value = "empty_square";
loadFixture();
runCheck();
runPv();
runGrid();
