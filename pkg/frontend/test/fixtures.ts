import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

export function fixtureDir(): string {
  return mkdtempSync(join(tmpdir(), "asrom-plots-"));
}

export function writeFixture(dir: string, name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

export const EIGENVALUES = [
  "index,lambda,lo,hi",
  ...Array.from({ length: 10 }, (_, i) => {
    const lam = Math.pow(10, -i);
    return `${i + 1},${lam},${0.7 * lam},${1.4 * lam}`;
  }),
].join("\n");

export const SUMMARY_1D = [
  "t_1,f",
  ...Array.from({ length: 40 }, (_, i) => `${i / 40},${Math.tanh(i / 10)}`),
].join("\n");

export const SUMMARY_2D = [
  "t_1,t_2,f",
  ...Array.from({ length: 40 }, (_, i) => `${i / 40},${((i * 7) % 40) / 40},${i / 40}`),
].join("\n");

export const SURROGATE_GRID = [
  "M,order,rel_error",
  ...[1, 2, 3].flatMap((m) =>
    [1, 2, 3, 4].map((o) => `${m},${o},${Math.pow(10, -m - o / 2)}`)
  ),
].join("\n");

export function singularValues(variant: string): string {
  const lines = ["family,index,sigma,variant"];
  for (const fam of ["velocity", "supremizer", "pressure"]) {
    for (let i = 1; i <= 15; i += 1) {
      const sigma = variant === "rom_as" ? Math.pow(10, -0.5 * i) : Math.pow(10, -0.25 * i);
      lines.push(`${fam},${i},${sigma},${variant}`);
    }
  }
  return lines.join("\n");
}

export function errorsCsv(variant: string): string {
  const scale = variant === "rom_as" ? 0.1 : 1.0;
  const lines = ["N,err_u,err_p,err_qoi,variant"];
  for (const n of [2, 5, 10, 15, 20]) {
    const e = scale * Math.pow(10, -n / 8);
    lines.push(`${n},${e},${e / 2},${e / 5},${variant}`);
  }
  return lines.join("\n");
}

export const ASPECT = [
  "sample_index,min,max,mean,frac_above_ref_max",
  ...Array.from(
    { length: 25 },
    (_, i) => `${i},1.01,${2.2 + 0.3 * Math.sin(i)},1.4,${i % 5 === 0 ? 0.002 : 0}`
  ),
].join("\n");
