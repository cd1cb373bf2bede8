/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const adstr_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
export const adstr_times: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const drone_render: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint, h: number) => [number, number];
export const sample_rate: () => number;
export const spectrum_db: (a: number, b: number, c: number) => [number, number];
export const supersaw_spectrum: (a: number, b: number, c: number, d: number) => [number, number];
export const supersaw_wave: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
