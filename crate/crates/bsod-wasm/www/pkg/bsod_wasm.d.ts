/* tslint:disable */
/* eslint-disable */

/**
 * Generates a labeled dataset (`kind` is "circle" or "moons") and returns
 * `{ xs, ys, labels, realized_contamination }`.
 */
export function generate_dataset(kind: string, n_inliers: number, contamination: number, seed: number): any;

/**
 * Runs a baseline (`method` is "lof" or "iforest") and returns
 * `{ flagged, scores }`.
 */
export function run_baseline(method: string, xs: Float64Array, ys: Float64Array, contamination: number, seed: number): any;

/**
 * Runs the boosted spectral detector and returns per-round removals for
 * animation: `{ flagged, scores, rounds: [{ removed, eigenvalue, ... }] }`.
 */
export function run_bsod(xs: Float64Array, ys: Float64Array, contamination: number, eps: number, seed: number): any;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly generate_dataset: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly run_baseline: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly run_bsod: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
