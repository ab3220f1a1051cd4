//! Embedded reference-table targets used for the `delta_vs_reference`
//! columns. These are transcribed data, not recomputed constants.

/// Spin-branch reference rows (natural units, fm^-1):
/// `(n, kappa, kappa_partner, e_morse2, e_morse1, e_th)` with `c_h = 0.01`
/// for the full-shape column.
pub const SPIN_TABLE: [(u32, i32, i32, f64, f64, f64); 8] = [
    (0, -2, 1, 0.0188481, 0.0158972, 0.0156445),
    (0, -3, 2, 0.0336562, 0.0289087, 0.0292850),
    (0, -4, 3, 0.0525273, 0.0454736, 0.0468568),
    (0, -5, 4, 0.0754350, 0.0655857, 0.0683657),
    (1, -2, 1, 0.0899995, 0.0721426, 0.0711732),
    (1, -3, 2, 0.1136725, 0.0933683, 0.0926634),
    (1, -4, 3, 0.1438031, 0.120011, 0.119939),
    (1, -5, 4, 0.1791425, 0.151061, 0.152013),
];

/// Pseudospin-branch reference rows (natural units, fm^-1), `c_h = -0.01`
/// for the full-shape column.
pub const PSPIN_TABLE: [(u32, i32, i32, f64, f64, f64); 8] = [
    (1, -1, 2, -0.0064123, -0.0063644, -0.0078235),
    (1, -2, 3, -0.0155771, -0.0152135, -0.0192390),
    (1, -3, 4, -0.0243659, -0.0233169, -0.0308043),
    (1, -4, 5, -0.0305297, -0.0285678, -0.0403430),
    (2, -1, 2, -0.0070204, -0.0070051, -0.0085285),
    (2, -2, 3, -0.0190441, -0.0188890, -0.0232805),
    (2, -3, 4, -0.0337719, -0.0331986, -0.0415466),
    (2, -4, 5, -0.0492150, -0.0478538, -0.0611045),
];

/// Molecular spin-branch reference energies in eV: `(n, kappa, h2, i2)`.
pub const MOLECULAR_SPIN_TABLE: [(u32, i32, f64, f64); 6] = [
    (1, -1, 4.496299243, 0.04301938173),
    (1, -2, 4.792825206, 0.04908477248),
    (1, -3, 5.265998324, 0.06198365883),
    (2, -1, 5.208297483, 0.1330310673),
    (2, -2, 5.393734566, 0.1391726596),
    (2, -3, 5.714484641, 0.1517415539),
];

/// Molecular pseudospin-branch reference energies in eV.
pub const MOLECULAR_PSPIN_TABLE: [(u32, i32, f64, f64); 6] = [
    (1, -1, -4.716308462, -0.04908477248),
    (1, -2, -5.219487600, -0.06198365885),
    (1, -3, -5.808371132, -0.0828077168),
    (2, -1, -5.377765079, -0.1391726596),
    (2, -2, -5.738903598, -0.1517415539),
    (2, -3, -6.198359366, -0.1712385573),
];
