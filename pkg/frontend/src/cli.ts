#!/usr/bin/env node
import { Command } from "commander";
import { InputError } from "./csv";
import { buildOption, Kind, KINDS } from "./kinds";
import { renderToFile } from "./render";

interface CliOptions {
  kind: string;
  in: string;
  in2?: string;
  out: string;
  width: string;
  height: string;
}

export function run(argv: string[]): number {
  const program = new Command();
  program
    .name("asrom-plots")
    .description("Render study figures from pipeline CSV artifacts")
    .requiredOption("--kind <kind>", `one of: ${KINDS.join(", ")}`)
    .requiredOption("--in <csv>", "input CSV")
    .option("--in2 <csv>", "second input CSV (variant comparison kinds)")
    .requiredOption("--out <image>", "output image path (.png or .svg)")
    .option("--width <px>", "image width", "900")
    .option("--height <px>", "image height", "620")
    .exitOverride()
    .configureOutput({ writeErr: (s) => process.stderr.write(s) });
  try {
    program.parse(argv, { from: "user" });
  } catch {
    return 2;
  }
  const opts = program.opts<CliOptions>();
  try {
    const option = buildOption(opts.kind as Kind, opts.in, opts.in2);
    renderToFile(option, opts.out, {
      width: Number(opts.width),
      height: Number(opts.height),
    });
    process.stdout.write(`${opts.out}\n`);
    return 0;
  } catch (err) {
    if (err instanceof InputError) {
      process.stderr.write(`input error: ${err.message}\n`);
      return 2;
    }
    process.stderr.write(`render failure: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
