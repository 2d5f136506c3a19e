import { readFileSync } from "fs";
import Papa from "papaparse";

/** Raised for any input-contract violation (missing file, bad header, no rows). */
export class InputError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

/** Load a CSV and insist on the exact columns a figure kind consumes. */
export function loadTable(path: string, required: string[]): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new InputError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new InputError(`${path}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new InputError(
        `missing required column "${col}" in ${path} (found: ${columns.join(", ") || "none"})`
      );
    }
  }
  if (parsed.data.length === 0) {
    throw new InputError(`no data rows in ${path}`);
  }
  return { path, columns, rows: parsed.data };
}

export function numbers(table: Table, column: string): number[] {
  return table.rows.map((row, i) => {
    const v = Number(row[column]);
    if (!Number.isFinite(v) && row[column] !== "nan") {
      throw new InputError(
        `non-numeric value "${row[column]}" in column "${column}" of ${table.path} (row ${i + 1})`
      );
    }
    return v;
  });
}
