import init, { rotation, adversarial_pair, kernel_heatmap } from "./pkg/blindconv_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (v) => v.map((x) => x.toFixed(3)).join(", ");

function show(el, fn) {
  try {
    el.classList.remove("err");
    fn();
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
  }
}

function drawRotation() {
  const theta = Number($("theta").value);
  const phi = Number($("phi").value);
  $("theta-v").textContent = theta.toFixed(3);
  $("phi-v").textContent = phi.toFixed(3);
  show($("rot-out"), () => {
    const r = JSON.parse(rotation(theta, phi));
    $("rot-gap").textContent = r.gap.toExponential(2);
    const z = r.z3.entries;
    const peak = Math.max(1e-12, ...z.map(Math.abs));
    $("rot-bars").replaceChildren(
      ...z.map((v) => {
        const d = document.createElement("div");
        d.style.height = `${(50 * Math.abs(v)) / peak}px`;
        if (v < 0) d.className = "neg";
        d.title = v.toFixed(4);
        return d;
      }),
    );
    $("rot-out").textContent = [
      `x3 = ${fmt(r.x3.entries)}`,
      `y3 = ${fmt(r.y3.entries)}`,
      `x4 = ${fmt(r.x4.entries)}`,
      `y4 = ${fmt(r.y4.entries)}`,
    ].join("\n");
  });
}

function parseSignal(text) {
  return Float64Array.from(text.split(/[\s,]+/).filter(Boolean).map(Number));
}

function runAttack() {
  show($("attack-out"), () => {
    const r = JSON.parse(adversarial_pair(parseSignal($("ax").value), parseSignal($("ay").value)));
    $("attack-out").textContent = [
      `x'        = ${fmt(r.x_alt.entries)}`,
      `y'        = ${fmt(r.y_alt.entries)}`,
      `x * y     = ${fmt(r.z.entries)}`,
      `x' * y'   = ${fmt(r.z_alt.entries)}`,
      `residual  = ${r.residual.toExponential(2)}`,
      `collinearity of x, x' = ${r.collinearity.toFixed(6)}`,
      `theta = ${r.theta.toFixed(4)}, phi = ${r.phi.toFixed(4)}`,
    ].join("\n");
  });
}

function runHeatmap() {
  const info = $("heat-info");
  show(info, () => {
    const r = JSON.parse(
      kernel_heatmap($("family").value, Number($("hm").value), Number($("hn").value), Number($("hseed").value)),
    );
    const { m, n, entries } = r.matrix;
    const peak = Math.max(1e-12, ...entries.flat().map(Math.abs));
    const canvas = $("heat");
    const cell = Math.floor(240 / Math.max(m, n));
    canvas.width = cell * n;
    canvas.height = cell * m;
    const ctx = canvas.getContext("2d");
    entries.forEach((row, i) =>
      row.forEach((v, j) => {
        const t = Math.abs(v) / peak;
        const c = Math.round(255 * (1 - t));
        ctx.fillStyle = v >= 0 ? `rgb(${c},${c},255)` : `rgb(255,${c},${c})`;
        ctx.fillRect(j * cell, i * cell, cell, cell);
      }),
    );
    info.textContent = `${m} x ${n}, rank ${r.rank}, largest anti-diagonal sum ${r.lift_residual.toExponential(2)}`;
  });
}

await init();
$("theta").addEventListener("input", drawRotation);
$("phi").addEventListener("input", drawRotation);
$("run-attack").addEventListener("click", runAttack);
$("run-heatmap").addEventListener("click", runHeatmap);
drawRotation();
runAttack();
runHeatmap();
