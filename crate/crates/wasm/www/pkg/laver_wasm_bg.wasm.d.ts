/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const doubling_ranks: (a: number, b: number) => [number, number, number, number];
export const enumerate: (a: number) => [number, number, number, number];
export const period_profile: (a: number, b: number) => [number, number, number, number];
export const periods: (a: number) => [number, number, number, number];
export const table_grid: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
