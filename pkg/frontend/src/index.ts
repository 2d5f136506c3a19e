export { InputError, loadTable, numbers } from "./csv";
export { buildOption, KINDS } from "./kinds";
export type { Kind } from "./kinds";
export { renderToFile } from "./render";
export { run } from "./cli";
