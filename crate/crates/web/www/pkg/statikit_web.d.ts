/* tslint:disable */
/* eslint-disable */

/**
 * Staticity and log flatness on affine space with variables `x, y, z, ...`.
 */
export function check_static(matrix: string, nvars: number): string;

/**
 * Edges as `0-1 1-2 ...`, divisors as whitespace separated integers.
 */
export function chip_firing(vertices: number, edges: string, d1: string, d2: string): string;

/**
 * Statifies a presentation over the quadrant in the variables `x, y`.
 */
export function statify_plane(matrix: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly check_static: (a: number, b: number, c: number) => [number, number];
    readonly chip_firing: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly statify_plane: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
