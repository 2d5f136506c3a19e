import type { EChartsOption } from "echarts";
import { InputError, loadTable, numbers, Table } from "./csv";

export const KINDS = [
  "eigenvalues",
  "summary",
  "surrogate_grid",
  "singular_values",
  "errors",
  "aspect",
] as const;

export type Kind = (typeof KINDS)[number];

const BASE: EChartsOption = {
  animation: false,
  backgroundColor: "#ffffff",
  grid: { left: 70, right: 90, top: 50, bottom: 55 },
};

/** Smallest positive value of a list, for clipping log-scale floors. */
function positiveFloor(values: number[]): number {
  const pos = values.filter((v) => v > 0);
  if (pos.length === 0) {
    throw new InputError("no positive values to draw on a log axis");
  }
  return Math.min(...pos);
}

function eigenvalueOption(table: Table): EChartsOption {
  const idx = numbers(table, "index");
  const lam = numbers(table, "lambda");
  const lo = numbers(table, "lo");
  const hi = numbers(table, "hi");
  const floor = positiveFloor([...lam, ...lo].filter((v) => v > 0)) * 0.5;
  const band = idx.map((x, i) => [x, Math.max(lo[i], floor), Math.max(hi[i], floor)]);
  return {
    ...BASE,
    title: { text: "Gradient covariance spectrum with resampling band" },
    xAxis: { type: "value", name: "index", minInterval: 1 },
    yAxis: { type: "log", name: "eigenvalue" },
    series: [
      {
        type: "custom",
        name: "band",
        renderItem: (params: any, api: any) => {
          if (params.dataIndex !== 0) return null as any;
          const upper = band.map((b) => api.coord([b[0], b[2]]));
          const lower = [...band].reverse().map((b) => api.coord([b[0], b[1]]));
          return {
            type: "polygon",
            shape: { points: [...upper, ...lower] },
            style: { fill: "#bbbbbb", opacity: 0.45 },
            silent: true,
          };
        },
        data: band,
        z: 1,
      },
      {
        type: "line",
        name: "estimate",
        showSymbol: true,
        symbol: "circle",
        symbolSize: 9,
        lineStyle: { width: 1.5 },
        itemStyle: { color: "#222222" },
        data: idx.map((x, i) => [x, Math.max(lam[i], floor)]),
        z: 3,
      },
    ],
  };
}

function summaryOption(table: Table): EChartsOption {
  const f = numbers(table, "f");
  if (table.columns.includes("t_2")) {
    const t1 = numbers(table, "t_1");
    const t2 = numbers(table, "t_2");
    return {
      ...BASE,
      title: { text: "Response over two active coordinates" },
      xAxis: { type: "value", name: "active coordinate 1" },
      yAxis: { type: "value", name: "active coordinate 2" },
      visualMap: {
        min: Math.min(...f),
        max: Math.max(...f),
        dimension: 2,
        orient: "vertical",
        right: 8,
        top: "center",
        text: ["f", ""],
        calculable: false,
        inRange: { color: ["#30497f", "#4cbf76", "#f4e04d", "#d1403a"] },
      },
      series: [
        {
          type: "scatter",
          symbolSize: 7,
          data: t1.map((x, i) => [x, t2[i], f[i]]),
        },
      ],
    };
  }
  const t1 = numbers(table, "t_1");
  return {
    ...BASE,
    title: { text: "Response over one active coordinate" },
    xAxis: { type: "value", name: "active coordinate" },
    yAxis: { type: "value", name: "f" },
    series: [
      {
        type: "scatter",
        symbolSize: 6,
        itemStyle: { color: "#30497f" },
        data: t1.map((x, i) => [x, f[i]]),
      },
    ],
  };
}

function surrogateGridOption(table: Table): EChartsOption {
  const dims = numbers(table, "M");
  const orders = numbers(table, "order");
  const errs = numbers(table, "rel_error");
  const logErr = errs.map((e) => Math.log10(Math.max(e, 1e-16)));
  const data = dims.map((m, i) => [orders[i], m, logErr[i]]);
  return {
    ...BASE,
    title: { text: "Surrogate test error (log10)" },
    xAxis: {
      type: "category",
      name: "polynomial order",
      data: [...new Set(orders)].sort((a, b) => a - b).map(String),
    },
    yAxis: {
      type: "category",
      name: "active dimension",
      data: [...new Set(dims)].sort((a, b) => a - b).map(String),
    },
    visualMap: {
      min: Math.min(...logErr),
      max: Math.max(...logErr),
      orient: "vertical",
      right: 8,
      top: "center",
      inRange: { color: ["#1a3b70", "#4cbf76", "#f4e04d", "#d1403a"] },
    },
    series: [
      {
        type: "heatmap",
        data: data.map(([o, m, v]) => [String(o), String(m), v]),
        label: { show: true, formatter: (p: any) => p.data[2].toFixed(1) },
      },
    ],
  };
}

const FAMILY_COLOR: Record<string, string> = {
  velocity: "#30497f",
  supremizer: "#4cbf76",
  pressure: "#d1403a",
};

function singularValueOption(table: Table, second?: Table): EChartsOption {
  const series: any[] = [];
  for (const t of second ? [table, second] : [table]) {
    const fams = t.rows.map((r) => r["family"]);
    const idx = numbers(t, "index");
    const sig = numbers(t, "sigma");
    const variants = t.rows.map((r) => r["variant"]);
    const keys = [...new Set(fams.map((f, i) => `${f}|${variants[i]}`))];
    for (const key of keys) {
      const [fam, variant] = key.split("|");
      const pts = idx
        .map((x, i) => [x, sig[i]] as [number, number])
        .filter((_, i) => fams[i] === fam && variants[i] === variant)
        .filter(([, s]) => s > 0); // noise-floor zeros cannot sit on a log axis
      series.push({
        type: "line",
        name: `${fam} (${variant})`,
        showSymbol: false,
        lineStyle: {
          width: 1.8,
          type: variant === "rom_as" ? "solid" : "dashed",
          color: FAMILY_COLOR[fam] ?? "#222222",
        },
        itemStyle: { color: FAMILY_COLOR[fam] ?? "#222222" },
        data: pts,
      });
    }
  }
  return {
    ...BASE,
    title: { text: "Mode energies per family" },
    legend: { top: 26 },
    xAxis: { type: "value", name: "mode index" },
    yAxis: { type: "log", name: "singular value" },
    series,
  };
}

const FIELD_LABEL: Record<string, string> = {
  err_u: "velocity",
  err_p: "pressure",
  err_qoi: "output",
};

function errorsOption(table: Table, second?: Table): EChartsOption {
  const series: any[] = [];
  for (const t of second ? [table, second] : [table]) {
    const n = numbers(t, "N");
    const variant = t.rows[0]["variant"];
    for (const field of ["err_u", "err_p", "err_qoi"]) {
      const vals = numbers(t, field);
      series.push({
        type: "line",
        name: `${FIELD_LABEL[field]} (${variant})`,
        symbol: "circle",
        symbolSize: 6,
        lineStyle: { type: variant === "rom_as" ? "solid" : "dashed" },
        data: n.map((x, i) => [x, vals[i]]).filter(([, v]) => v > 0),
      });
    }
  }
  return {
    ...BASE,
    title: { text: "Reduction error versus retained modes" },
    legend: { top: 26 },
    xAxis: { type: "value", name: "modes per family", minInterval: 1 },
    yAxis: { type: "log", name: "mean relative error" },
    series,
  };
}

function aspectOption(table: Table): EChartsOption {
  const idx = numbers(table, "sample_index");
  const series: any[] = [];
  for (const [col, color] of [
    ["min", "#4cbf76"],
    ["mean", "#30497f"],
    ["max", "#d1403a"],
  ] as const) {
    const vals = numbers(table, col);
    series.push({
      type: "line",
      name: col,
      showSymbol: false,
      itemStyle: { color },
      lineStyle: { color, width: 1.5 },
      data: idx.map((x, i) => [x, vals[i]]),
    });
  }
  const frac = numbers(table, "frac_above_ref_max");
  series.push({
    type: "line",
    name: "% above reference max",
    yAxisIndex: 1,
    showSymbol: false,
    lineStyle: { color: "#888800", width: 1.5 },
    itemStyle: { color: "#888800" },
    data: idx.map((x, i) => [x, 100 * frac[i]]),
  });
  return {
    ...BASE,
    title: { text: "Cell shape quality across training deformations" },
    legend: { top: 26 },
    xAxis: { type: "value", name: "morph sample" },
    yAxis: [
      { type: "value", name: "aspect ratio" },
      { type: "value", name: "% cells above reference" },
    ],
    series,
  };
}

const REQUIRED: Record<Kind, string[]> = {
  eigenvalues: ["index", "lambda", "lo", "hi"],
  summary: ["t_1", "f"],
  surrogate_grid: ["M", "order", "rel_error"],
  singular_values: ["family", "index", "sigma", "variant"],
  errors: ["N", "err_u", "err_p", "err_qoi", "variant"],
  aspect: ["sample_index", "min", "max", "mean", "frac_above_ref_max"],
};

export function buildOption(kind: Kind, inPath: string, in2Path?: string): EChartsOption {
  if (!KINDS.includes(kind)) {
    throw new InputError(`unknown figure kind "${kind}"; choices: ${KINDS.join(", ")}`);
  }
  const table = loadTable(inPath, REQUIRED[kind]);
  const second = in2Path ? loadTable(in2Path, REQUIRED[kind]) : undefined;
  switch (kind) {
    case "eigenvalues":
      return eigenvalueOption(table);
    case "summary":
      return summaryOption(table);
    case "surrogate_grid":
      return surrogateGridOption(table);
    case "singular_values":
      return singularValueOption(table, second);
    case "errors":
      return errorsOption(table, second);
    case "aspect":
      return aspectOption(table);
  }
}
