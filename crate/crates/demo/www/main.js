import init, { builtinNames, builtinSource, apply, compare, check } from "./pkg/otfst_demo.js";

const $ = (id) => document.getElementById(id);

function grammar() {
  const name = $("builtin").value;
  return name === "custom" ? $("source").value : name;
}

function show(id, f) {
  const el = $(id);
  try {
    el.textContent = f();
    el.classList.remove("err");
  } catch (e) {
    el.textContent = e.message ?? String(e);
    el.classList.add("err");
  }
}

await init();

for (const name of [...builtinNames().split("\n"), "custom"]) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = name;
  $("builtin").append(opt);
}
$("builtin").value = "ps-syll:2";
$("source").value = builtinSource("hiller");

$("builtin").addEventListener("change", () => {
  $("source").hidden = $("builtin").value !== "custom";
});

$("run-apply").addEventListener("click", () =>
  show("apply-out", () => apply(grammar(), $("method").value, $("prec").value, $("input").value) || "(no output)"));

$("run-compare").addEventListener("click", () => {
  let c;
  show("count-out", () => {
    c = compare(grammar(), $("prec").value, $("input").value);
    return c.counting;
  });
  if (!c) return;
  $("match-out").textContent = c.matching;
  $("count-states").textContent = `${c.counting_states} states`;
  $("match-states").textContent = `${c.matching_states} states`;
  c.free();
});

$("run-check").addEventListener("click", () =>
  show("check-out", () => check(grammar(), $("method").value, $("prec").value, Number($("len").value) || 0)));
