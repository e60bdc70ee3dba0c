/* tslint:disable */
/* eslint-disable */

/**
 * The ranks `m < max_rank` at which the period of `a` doubles, i.e.
 * where `γ_m` is in the range of `a`.
 */
export function doubling_ranks(a: number, max_rank: number): Uint32Array;

/**
 * The ordinals below `γ_below`, one per line.
 */
export function enumerate(below: number): string;

/**
 * `p_m(a mod 2^m)` for `m = 0..=max_rank`.
 */
export function period_profile(a: number, max_rank: number): Uint32Array;

/**
 * `p_n(a)` for every `a < 2^n`.
 */
export function periods(n: number): Uint32Array;

/**
 * Row-major `2^n x 2^n` values of `a * b`, `b = 1..=2^n`.
 */
export function table_grid(n: number): Uint32Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly doubling_ranks: (a: number, b: number) => [number, number, number, number];
    readonly enumerate: (a: number) => [number, number, number, number];
    readonly period_profile: (a: number, b: number) => [number, number, number, number];
    readonly periods: (a: number) => [number, number, number, number];
    readonly table_grid: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
