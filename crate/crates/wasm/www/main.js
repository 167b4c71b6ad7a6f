import init, { levels, por_curves, cooperation } from "./pkg/levelk_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function market() {
  return [num("a"), num("b"), num("c"), num("m")];
}

// Minimal line plot: series = [{ label, xs, ys, color, dashed, points }],
// bands = [{ from, to, color }] shaded along x.
function plot(canvas, { series, bands = [], xLabel = "", yLabel = "", markX = null }) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const ctx = canvas.getContext("2d");
  ctx.scale(dpr, dpr);
  ctx.clearRect(0, 0, w, h);

  const pad = { l: 60, r: 15, t: 10, b: 40 };
  const finite = (v) => v !== null && Number.isFinite(v);
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys.filter(finite));
  if (!xs.length || !ys.length) return;
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-12) { y0 -= 0.5 * Math.abs(y0 || 1) * 0.01 + 1e-6; y1 += 0.5 * Math.abs(y1 || 1) * 0.01 + 1e-6; }
  const ym = (y1 - y0) * 0.05;
  y0 -= ym; y1 += ym;
  const X = (x) => pad.l + ((x - x0) / (x1 - x0 || 1)) * (w - pad.l - pad.r);
  const Y = (y) => h - pad.b - ((y - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  for (const band of bands) {
    ctx.fillStyle = band.color;
    ctx.fillRect(X(Math.max(band.from, x0)), pad.t, X(Math.min(band.to, x1)) - X(Math.max(band.from, x0)), h - pad.t - pad.b);
  }

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "11px system-ui, sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad.l, pad.t);
  ctx.lineTo(pad.l, h - pad.b);
  ctx.lineTo(w - pad.r, h - pad.b);
  ctx.stroke();
  for (let i = 0; i <= 4; i++) {
    const yv = y0 + ((y1 - y0) * i) / 4;
    const xv = x0 + ((x1 - x0) * i) / 4;
    ctx.textAlign = "right";
    ctx.fillText(yv.toPrecision(4), pad.l - 4, Y(yv) + 4);
    ctx.textAlign = "center";
    ctx.fillText(xv.toPrecision(3), X(xv), h - pad.b + 14);
  }
  ctx.fillText(xLabel, (pad.l + w - pad.r) / 2, h - 6);
  ctx.save();
  ctx.translate(12, (pad.t + h - pad.b) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();

  if (markX !== null) {
    ctx.strokeStyle = "#555";
    ctx.setLineDash([2, 3]);
    ctx.beginPath();
    ctx.moveTo(X(markX), pad.t);
    ctx.lineTo(X(markX), h - pad.b);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.lineWidth = 1.8;
    ctx.setLineDash(s.dashed ? [6, 4] : []);
    ctx.beginPath();
    let drawing = false;
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!finite(y)) { drawing = false; return; }
      if (drawing) ctx.lineTo(X(x), Y(y)); else ctx.moveTo(X(x), Y(y));
      drawing = true;
    });
    ctx.stroke();
    if (s.points) {
      s.xs.forEach((x, i) => {
        if (!finite(s.ys[i])) return;
        ctx.beginPath();
        ctx.arc(X(x), Y(s.ys[i]), 2.5, 0, 2 * Math.PI);
        ctx.fill();
      });
    }
  }
  ctx.setLineDash([]);
}

function legend(id, series) {
  $(id).innerHTML = series
    .map((s) => `<span><i style="background:${s.color}"></i>${s.label}</span>`)
    .join("");
}

function guarded(errorId, fn) {
  try {
    $(errorId).textContent = "";
    fn();
  } catch (err) {
    $(errorId).textContent = String(err.message || err);
  }
}

function drawLevels() {
  guarded("lv-error", () => {
    const v = JSON.parse(levels(...market(), num("lv-f"), num("lv-k"), num("lv-kmax")));
    const ks = v.paths.map((p) => p.k);
    const paths = [
      { label: "q_S (level k)", xs: ks, ys: v.paths.map((p) => p.q_s), color: COLORS[0], points: true },
      { label: "q_B (level k)", xs: ks, ys: v.paths.map((p) => p.q_b), color: COLORS[1], points: true },
      { label: "q_S equilibrium", xs: [ks[0], ks[ks.length - 1]], ys: [v.ne_q_s, v.ne_q_s], color: COLORS[0], dashed: true },
      { label: "q_B equilibrium", xs: [ks[0], ks[ks.length - 1]], ys: [v.ne_q_b, v.ne_q_b], color: COLORS[1], dashed: true },
    ];
    plot($("lv-paths"), { series: paths, xLabel: "rationality level", yLabel: "quantity" });
    legend("lv-paths-legend", paths);

    const ds = v.welfare_vs_delta.map((d) => d.delta);
    const welfare = [
      { label: `welfare, S at level ${v.k}`, xs: ds, ys: v.welfare_vs_delta.map((d) => d.welfare), color: COLORS[2], points: true },
      { label: "equilibrium welfare", xs: [ds[0], ds[ds.length - 1]], ys: [v.welfare_ne, v.welfare_ne], color: "#777", dashed: true },
      { label: "maximum welfare", xs: [ds[0], ds[ds.length - 1]], ys: [v.max_welfare, v.max_welfare], color: "#000", dashed: true },
    ];
    plot($("lv-delta"), { series: welfare, xLabel: "planner level minus k", yLabel: "welfare" });
    legend("lv-delta-legend", welfare);
  });
}

function drawPor() {
  guarded("por-error", () => {
    const v = JSON.parse(por_curves(...market(), num("por-k"), $("por-deltas").value, num("por-n")));
    const series = v.curves.map((c, i) => ({
      label: `delta = ${c.delta}`,
      xs: v.beta,
      ys: c.por,
      color: COLORS[i % COLORS.length],
    }));
    const bands = v.curves
      .map((c, i) => (c.region ? { from: c.region[0], to: c.region[1], color: COLORS[i % COLORS.length] + "22" } : null))
      .filter(Boolean);
    series.push({ label: "PoR = 1", xs: [v.beta[0], v.beta[v.beta.length - 1]], ys: [1, 1], color: "#000", dashed: true });
    plot($("por-plot"), { series, bands, xLabel: "capacity / ((b - c)/a)", yLabel: "price of rationality" });
    legend("por-legend", series);
  });
}

function drawCooperation() {
  guarded("co-error", () => {
    const v = JSON.parse(cooperation(...market(), num("co-f"), num("co-k"), num("co-n")));
    const gammaCurve = [{ label: `optimal cooperation level, k = ${v.k}`, xs: v.capacity, ys: v.gamma_star_vs_f, color: COLORS[3] }];
    plot($("co-gamma"), { series: gammaCurve, xLabel: "capacity f", yLabel: "gamma*", markX: v.f });
    legend("co-gamma-legend", gammaCurve);

    const welfare = [
      { label: `welfare at f = ${v.f}`, xs: v.gamma, ys: v.welfare_vs_gamma, color: COLORS[4] },
      { label: "equilibrium welfare", xs: [v.gamma[0], v.gamma[v.gamma.length - 1]], ys: [v.welfare_ne, v.welfare_ne], color: "#777", dashed: true },
    ];
    plot($("co-welfare"), { series: welfare, xLabel: "cooperation level gamma", yLabel: "welfare", markX: v.gamma_star });
    legend("co-welfare-legend", welfare);

    const multi = v.multiple_optima === null ? "" : v.multiple_optima ? " Every gamma <= -1 is optimal as well." : "";
    $("co-summary").textContent =
      `gamma* = ${v.gamma_star.toPrecision(6)}, welfare ${v.welfare_star.toPrecision(8)} vs equilibrium ${v.welfare_ne.toPrecision(8)}.${multi}`;
  });
}

function drawAll() {
  drawLevels();
  drawPor();
  drawCooperation();
}

await init();
for (const input of document.querySelectorAll("input")) {
  input.addEventListener("input", () => {
    if (input.id.startsWith("lv-")) drawLevels();
    else if (input.id.startsWith("por-")) drawPor();
    else if (input.id.startsWith("co-")) drawCooperation();
    else drawAll();
  });
}
window.addEventListener("resize", drawAll);
drawAll();
