import init, { distances, solve_distances, random_instance, success_curve } from "./pkg/turnpike_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value) || 0;
const call = (f, ...args) => JSON.parse(f(...args));
const fmt = (xs) => (xs && xs.length ? xs.join(" ") : "(none)");

function show(el, text, isError) {
  el.textContent = text;
  el.className = isError ? "err" : "";
}

function computeDistances() {
  const r = call(distances, $("d-set").value, num("d-mod"));
  if (r.error) return show($("d-out"), r.error, true);
  show($("d-out"), `|W| = ${r.distances.length}\n${fmt(r.distances)}`);
  return r;
}

function drawSolution(r, modulus) {
  const cv = $("s-plot");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const pts = r.vertices.length ? r.vertices : r.recovered || [];
  if (!pts.length) return;
  const top = modulus || Math.max(...pts, 1);
  const pad = 30;
  const y = cv.height - 60;
  const x = (v) => pad + (v / top) * (cv.width - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, y);
  ctx.lineTo(cv.width - pad, y);
  ctx.stroke();

  // arcs for unique differences, height grows with span
  ctx.strokeStyle = "rgba(120,120,120,0.35)";
  for (const [a, b] of r.edges) {
    const x0 = x(Math.min(a, b));
    const x1 = x(Math.max(a, b));
    const h = Math.min(y - 10, (x1 - x0) / 2);
    ctx.beginPath();
    ctx.moveTo(x0, y);
    ctx.bezierCurveTo(x0, y - h, x1, y - h, x1, y);
    ctx.stroke();
  }

  const certified = new Set(r.certified);
  const anchors = new Set(r.anchors);
  const recovered = new Set(r.recovered || []);
  for (const v of new Set([...pts, ...recovered])) {
    const px = x(v);
    ctx.strokeStyle = "#999";
    ctx.beginPath();
    ctx.moveTo(px, y - 6);
    ctx.lineTo(px, y + 6);
    ctx.stroke();
    if (certified.has(v)) {
      ctx.fillStyle = "#1f6fb2";
      ctx.beginPath();
      ctx.arc(px, y, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    if (anchors.has(v)) {
      ctx.strokeStyle = "#d2691e";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(px, y, 8, 0, 2 * Math.PI);
      ctx.stroke();
      ctx.lineWidth = 1;
    }
    if (recovered.has(v)) {
      ctx.fillStyle = "#2a8a2a";
      ctx.beginPath();
      ctx.moveTo(px, y + 12);
      ctx.lineTo(px - 5, y + 22);
      ctx.lineTo(px + 5, y + 22);
      ctx.fill();
      ctx.fillStyle = "#333";
      ctx.fillText(String(v), px - 6, y + 36);
    }
  }
}

function solve() {
  const modulus = num("s-mod");
  const r = call(solve_distances, $("s-w").value, modulus, num("s-t"));
  if (r.error) {
    show($("s-out"), r.error, true);
    drawSolution({ vertices: [], edges: [], certified: [], anchors: [] }, 0);
    return;
  }
  const lines = [
    r.recovered ? `recovered: ${fmt(r.recovered)}` : `FAILED: ${r.failure}`,
    `u01: ${r.u01 ?? "-"}` + (r.u02 != null ? `   u02: ${r.u02}` : ""),
  ];
  if (r.first_intersection.length) lines.push(`W ∩ W1: ${fmt(r.first_intersection)}`);
  lines.push(`certified: ${fmt(r.certified)}`);
  lines.push(`anchors: ${fmt(r.anchors)}`);
  if (r.candidate.length) lines.push(`${modulus ? "candidate" : "survivors"}: ${fmt(r.candidate)}`);
  if (r.path) lines.push(`path: ${r.path}`);
  show($("s-out"), lines.join("\n"));
  drawSolution(r, modulus);
}

function randomInstance() {
  const r = call(random_instance, num("r-n"), num("r-k"), num("r-seed"), num("s-mod"));
  if (r.error) return show($("s-out"), r.error, true);
  $("s-w").value = r.distances.join(" ");
  $("d-set").value = r.set.join(" ");
  solve();
  show($("s-out"), `hidden set: ${fmt(r.set)}\n` + $("s-out").textContent);
}

function drawCurve(points, n) {
  const cv = $("c-plot");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const pad = { l: 50, r: 20, t: 15, b: 40 };
  const kmax = Math.max(...points.map((p) => p.k), 1);
  const x = (k) => pad.l + (k / kmax) * (cv.width - pad.l - pad.r);
  const y = (p) => cv.height - pad.b - p * (cv.height - pad.t - pad.b);

  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#333";
  ctx.beginPath();
  ctx.moveTo(pad.l, pad.t);
  ctx.lineTo(pad.l, y(0));
  ctx.lineTo(cv.width - pad.r, y(0));
  ctx.stroke();
  for (const p of [0, 0.25, 0.5, 0.75, 1]) {
    ctx.fillText(p.toFixed(2), 12, y(p) + 4);
  }
  for (const pt of points) ctx.fillText(String(pt.k), x(pt.k) - 6, y(0) + 16);
  ctx.fillText(`k (n = ${n})`, cv.width / 2 - 20, cv.height - 6);

  ctx.strokeStyle = "#1f6fb2";
  ctx.lineWidth = 2;
  ctx.beginPath();
  points.forEach((pt, i) => (i ? ctx.lineTo(x(pt.k), y(pt.rate)) : ctx.moveTo(x(pt.k), y(pt.rate))));
  ctx.stroke();
  ctx.lineWidth = 1;
  ctx.fillStyle = "#1f6fb2";
  for (const pt of points) {
    ctx.beginPath();
    ctx.arc(x(pt.k), y(pt.rate), 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function runCurve() {
  $("c-status").textContent = "running...";
  // let the status paint before the synchronous run
  setTimeout(() => {
    const t0 = performance.now();
    const n = num("c-n");
    const r = call(success_curve, n, $("c-ks").value, num("c-trials"), num("c-seed"), $("c-circ").checked);
    if (r.error) {
      $("c-status").textContent = r.error;
      return;
    }
    drawCurve(r, n);
    $("c-status").textContent = `${((performance.now() - t0) / 1000).toFixed(2)} s`;
  }, 20);
}

await init();
$("d-go").onclick = computeDistances;
$("d-use").onclick = () => {
  const r = computeDistances();
  if (!r) return;
  $("s-w").value = r.distances.join(" ");
  $("s-mod").value = $("d-mod").value;
  solve();
};
$("s-go").onclick = solve;
$("r-go").onclick = randomInstance;
$("c-go").onclick = runCurve;
computeDistances();
solve();
