/* tslint:disable */
/* eslint-disable */

/**
 * Envelope level at `points` evenly spaced instants over `total` seconds.
 * Knobs are in `[0, 1]` except `t_time` in `[-1, 1]`; the gate closes at `gate_off` seconds.
 */
export function adstr_curve(attack: number, decay: number, sustain: number, t_time: number, release: number, gate_off: number, total: number, points: number): Float32Array;

/**
 * Envelope segment boundaries in seconds: attack end, decay end, slope end, release length.
 */
export function adstr_times(attack: number, decay: number, sustain: number, t_time: number, release: number): Float64Array;

/**
 * Renders the drone engine with the given knobs; everything else stays at its default.
 */
export function drone_render(fundamental: number, spread: number, n_voices: number, avg_rate: number, resonance: number, env_pitch_mod: number, seed: bigint, seconds: number): Float32Array;

export function sample_rate(): number;

/**
 * Welch power spectrum in dB of an interleaved stereo buffer's mono sum,
 * normalised so the loudest bin is 0 dB. `segment` must be a power of two.
 */
export function spectrum_db(interleaved: Float32Array, segment: number): Float32Array;

/**
 * Blackman-Harris magnitude spectrum in dB of the oscillator's mono sum,
 * normalised so the loudest bin is 0 dB. Bin `k` is `k * sample_rate / 8192` Hz.
 */
export function supersaw_spectrum(note: number, shape: number, detune: number, width: number): Float32Array;

/**
 * Raw eight-voice oscillator output, no filter or envelope.
 */
export function supersaw_wave(note: number, shape: number, detune: number, width: number, frames: number): Float32Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly adstr_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
    readonly adstr_times: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly drone_render: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint, h: number) => [number, number];
    readonly sample_rate: () => number;
    readonly spectrum_db: (a: number, b: number, c: number) => [number, number];
    readonly supersaw_spectrum: (a: number, b: number, c: number, d: number) => [number, number];
    readonly supersaw_wave: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
