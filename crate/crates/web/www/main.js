import init, { bernstein_curve, two_atom_rp, abs_power_rn } from "./pkg/reflpos_web.js";

const W = 800, H = 220, PAD = 24;

function plot(svg, t, v) {
  const pts = t.map((x, i) => [x, v[i]]).filter(([, y]) => y !== null && Number.isFinite(y));
  if (!pts.length) { svg.innerHTML = ""; return; }
  const xs = pts.map(p => p[0]), ys = pts.map(p => p[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-12) { y0 -= 1; y1 += 1; }
  const sx = x => PAD + (x - x0) / (x1 - x0 || 1) * (W - 2 * PAD);
  const sy = y => H - PAD - (y - y0) / (y1 - y0) * (H - 2 * PAD);
  const d = pts.map(([x, y], i) => `${i ? "L" : "M"}${sx(x).toFixed(1)},${sy(y).toFixed(1)}`).join("");
  const axis = y0 <= 0 && y1 >= 0 ? `<line x1="${PAD}" x2="${W - PAD}" y1="${sy(0)}" y2="${sy(0)}" stroke="#ccc"/>` : "";
  svg.innerHTML = `${axis}<path d="${d}" fill="none" stroke="#2457a6" stroke-width="2"/>` +
    `<text x="${PAD}" y="14" font-size="11">${y1.toPrecision(4)}</text>` +
    `<text x="${PAD}" y="${H - 6}" font-size="11">${y0.toPrecision(4)}</text>`;
}

function wire(id, compute) {
  const root = document.getElementById(id);
  const inputs = [...root.querySelectorAll("input")];
  const update = () => {
    const p = Object.fromEntries(inputs.map(i => [i.dataset.k, parseFloat(i.value)]));
    root.querySelector(".params").textContent = Object.entries(p).map(([k, v]) => `${k}=${v}`).join("  ");
    const out = JSON.parse(compute(p));
    const verdict = root.querySelector(".verdict");
    if (out.error) {
      verdict.className = "verdict FAIL";
      verdict.textContent = "error: " + out.error;
      return;
    }
    verdict.className = "verdict " + out.verdict;
    verdict.textContent = out.verdict;
    plot(root.querySelector("svg"), out.curve.t, out.curve.value);
    const parts = root.querySelector(".parts");
    if (parts) {
      parts.textContent = out.parts.map(q =>
        `${q.name.padEnd(17)} ${q.verdict.padEnd(13)} extremal ${q.extremal.toExponential(3)}` +
        (q.witness ? `\n  witness [${q.witness.map(w => w.toFixed(3)).join(", ")}]` : "")).join("\n");
    }
  };
  inputs.forEach(i => i.addEventListener("input", update));
  update();
}

await init();
wire("bernstein", p => bernstein_curve(p.a, p.b, p.coef, p.power, p.rate, 5, 120));
wire("two-atom", p => two_atom_rp(p.lambda, p.c, p.a, 12));
wire("abs-power", p => abs_power_rn(p.alpha, p.a, 12));
