/* @ts-self-types="./gloam_web.d.ts" */

/**
 * Envelope level at `points` evenly spaced instants over `total` seconds.
 * Knobs are in `[0, 1]` except `t_time` in `[-1, 1]`; the gate closes at `gate_off` seconds.
 * @param {number} attack
 * @param {number} decay
 * @param {number} sustain
 * @param {number} t_time
 * @param {number} release
 * @param {number} gate_off
 * @param {number} total
 * @param {number} points
 * @returns {Float32Array}
 */
export function adstr_curve(attack, decay, sustain, t_time, release, gate_off, total, points) {
    const ret = wasm.adstr_curve(attack, decay, sustain, t_time, release, gate_off, total, points);
    var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v1;
}

/**
 * Envelope segment boundaries in seconds: attack end, decay end, slope end, release length.
 * @param {number} attack
 * @param {number} decay
 * @param {number} sustain
 * @param {number} t_time
 * @param {number} release
 * @returns {Float64Array}
 */
export function adstr_times(attack, decay, sustain, t_time, release) {
    const ret = wasm.adstr_times(attack, decay, sustain, t_time, release);
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Renders the drone engine with the given knobs; everything else stays at its default.
 * @param {number} fundamental
 * @param {number} spread
 * @param {number} n_voices
 * @param {number} avg_rate
 * @param {number} resonance
 * @param {number} env_pitch_mod
 * @param {bigint} seed
 * @param {number} seconds
 * @returns {Float32Array}
 */
export function drone_render(fundamental, spread, n_voices, avg_rate, resonance, env_pitch_mod, seed, seconds) {
    const ret = wasm.drone_render(fundamental, spread, n_voices, avg_rate, resonance, env_pitch_mod, seed, seconds);
    var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v1;
}

/**
 * @returns {number}
 */
export function sample_rate() {
    const ret = wasm.sample_rate();
    return ret;
}

/**
 * Welch power spectrum in dB of an interleaved stereo buffer's mono sum,
 * normalised so the loudest bin is 0 dB. `segment` must be a power of two.
 * @param {Float32Array} interleaved
 * @param {number} segment
 * @returns {Float32Array}
 */
export function spectrum_db(interleaved, segment) {
    const ptr0 = passArrayF32ToWasm0(interleaved, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.spectrum_db(ptr0, len0, segment);
    var v2 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v2;
}

/**
 * Blackman-Harris magnitude spectrum in dB of the oscillator's mono sum,
 * normalised so the loudest bin is 0 dB. Bin `k` is `k * sample_rate / 8192` Hz.
 * @param {number} note
 * @param {number} shape
 * @param {number} detune
 * @param {number} width
 * @returns {Float32Array}
 */
export function supersaw_spectrum(note, shape, detune, width) {
    const ret = wasm.supersaw_spectrum(note, shape, detune, width);
    var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v1;
}

/**
 * Raw eight-voice oscillator output, no filter or envelope.
 * @param {number} note
 * @param {number} shape
 * @param {number} detune
 * @param {number} width
 * @param {number} frames
 * @returns {Float32Array}
 */
export function supersaw_wave(note, shape, detune, width, frames) {
    const ret = wasm.supersaw_wave(note, shape, detune, width, frames);
    var v1 = getArrayF32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./gloam_web_bg.js": import0,
    };
}

function getArrayF32FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat32ArrayMemory0().subarray(ptr / 4, ptr / 4 + len);
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat32ArrayMemory0 = null;
function getFloat32ArrayMemory0() {
    if (cachedFloat32ArrayMemory0 === null || cachedFloat32ArrayMemory0.byteLength === 0) {
        cachedFloat32ArrayMemory0 = new Float32Array(wasm.memory.buffer);
    }
    return cachedFloat32ArrayMemory0;
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function passArrayF32ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 4, 4) >>> 0;
    getFloat32ArrayMemory0().set(arg, ptr / 4);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat32ArrayMemory0 = null;
    cachedFloat64ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('gloam_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
