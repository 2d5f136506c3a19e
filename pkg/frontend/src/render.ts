import { writeFileSync } from "fs";
import { createCanvas } from "@napi-rs/canvas";
import * as echarts from "echarts";
import type { EChartsOption } from "echarts";
import { InputError } from "./csv";

echarts.setPlatformAPI({
  createCanvas: () => createCanvas(32, 32) as unknown as HTMLCanvasElement,
});

export interface RenderSettings {
  width?: number;
  height?: number;
}

/** Render an option to PNG (default) or SVG, chosen by the output suffix. */
export function renderToFile(
  option: EChartsOption,
  outPath: string,
  settings: RenderSettings = {}
): void {
  const width = settings.width ?? 900;
  const height = settings.height ?? 620;
  if (outPath.toLowerCase().endsWith(".svg")) {
    const chart = echarts.init(null, null, {
      renderer: "svg",
      ssr: true,
      width,
      height,
    });
    chart.setOption(option);
    writeFileSync(outPath, chart.renderToSVGString());
    chart.dispose();
    return;
  }
  if (!outPath.toLowerCase().endsWith(".png")) {
    throw new InputError(`unsupported output format for ${outPath}; use .png or .svg`);
  }
  const canvas = createCanvas(width, height);
  const chart = echarts.init(canvas as unknown as HTMLElement);
  chart.setOption(option);
  writeFileSync(outPath, canvas.toBuffer("image/png"));
  chart.dispose();
}
