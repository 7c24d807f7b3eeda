// Build the bindings first: wasm-pack build --target web --out-dir www/pkg crates/web
import init, { classNumberReport, eulerCurve, familyScatter } from "./pkg/realquad_web.js";

const $ = (id) => document.getElementById(id);

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
}

function scaler(lo, hi, a, b) {
  const span = hi - lo || 1;
  return (v) => a + ((v - lo) / span) * (b - a);
}

function label(ctx, text, x, y) {
  ctx.fillStyle = "#333";
  ctx.fillText(text, x, y);
}

function plotCurve(values) {
  const canvas = $("eu-plot");
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const exact = values[values.length - 1];
  const zs = [], ps = [];
  for (let i = 0; i + 1 < values.length - 1; i += 2) {
    zs.push(Math.log10(values[i]));
    ps.push(values[i + 1]);
  }
  const lo = Math.min(exact, ...ps), hi = Math.max(exact, ...ps);
  const sx = scaler(zs[0], zs[zs.length - 1], pad, canvas.width - pad);
  const sy = scaler(lo, hi, canvas.height - pad, pad);
  axes(ctx, canvas.width, canvas.height, pad);
  ctx.strokeStyle = "#06c";
  ctx.beginPath();
  zs.forEach((z, i) => (i ? ctx.lineTo(sx(z), sy(ps[i])) : ctx.moveTo(sx(z), sy(ps[i]))));
  ctx.stroke();
  ctx.setLineDash([5, 4]);
  ctx.strokeStyle = "#c60";
  ctx.beginPath();
  ctx.moveTo(pad, sy(exact));
  ctx.lineTo(canvas.width - pad, sy(exact));
  ctx.stroke();
  ctx.setLineDash([]);
  label(ctx, `L = ${exact.toFixed(8)}`, pad + 6, sy(exact) - 6);
  label(ctx, `z = ${values[values.length - 3].toExponential(1)}`, canvas.width - pad - 70, canvas.height - pad + 16);
}

function plotScatter(values) {
  const canvas = $("fa-plot");
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const xs = [], ys = [];
  for (let i = 0; i + 1 < values.length; i += 2) {
    xs.push(Math.log10(values[i]));
    ys.push(values[i + 1]);
  }
  const sx = scaler(Math.min(...xs), Math.max(...xs), pad, canvas.width - pad);
  const sy = scaler(0, Math.max(...ys), canvas.height - pad, pad);
  axes(ctx, canvas.width, canvas.height, pad);
  ctx.fillStyle = "rgba(0, 100, 200, 0.35)";
  xs.forEach((x, i) => ctx.fillRect(sx(x) - 1, sy(ys[i]) - 1, 2, 2));
  label(ctx, "log10 d", canvas.width - pad - 40, canvas.height - pad + 16);
  const best = ys.indexOf(Math.max(...ys));
  $("fa-info").textContent = `${xs.length} members; largest statistic ${ys[best].toFixed(4)} at d = ${values[2 * best]}`;
}

function guard(fn, errEl) {
  return () => {
    if (errEl) errEl.textContent = "";
    try {
      fn();
    } catch (e) {
      (errEl || $("cn-out")).textContent = String(e);
    }
  };
}

await init();

$("cn-go").onclick = guard(() => {
  const report = JSON.parse(classNumberReport(Number($("cn-d").value)));
  $("cn-out").textContent = JSON.stringify(report, null, 2);
}, $("cn-out"));

$("eu-go").onclick = guard(() => plotCurve(eulerCurve(Number($("eu-d").value), Number($("eu-z").value), 60)), $("eu-err"));

$("fa-go").onclick = guard(() => plotScatter(familyScatter(Number($("fa-x").value), Number($("fa-z").value))), $("fa-info"));

$("cn-go").click();
$("eu-go").click();
$("fa-go").click();
