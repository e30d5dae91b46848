//! Deterministic instance generators for smoke testing and sampling sweeps.

use std::fmt;
use std::str::FromStr;

use crate::grid::{GridError, GridInstance, GridParams};
use crate::line::{LineError, LineFlavor, LineInstance};

/// SplitMix64: tiny, well-specified, and reproducible across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform-enough draw in `0..n` for desk-scale `n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.next_u64() % denominator < numerator
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenStyle {
    /// Independent random cells / random partial injections.
    Random,
    /// One long path from the distinguished start, everything else dead.
    SinglePath,
    /// Merge-heavy (forward) or chain-fragmenting (reversible) tables.
    LayeredAdversarial,
    /// The all-null table: the least instance with a solution.
    ForcedMinimal,
}

impl fmt::Display for GenStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenStyle::Random => "random",
            GenStyle::SinglePath => "single-path",
            GenStyle::LayeredAdversarial => "layered-adversarial",
            GenStyle::ForcedMinimal => "forced-minimal",
        })
    }
}

impl FromStr for GenStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(GenStyle::Random),
            "single-path" => Ok(GenStyle::SinglePath),
            "layered-adversarial" => Ok(GenStyle::LayeredAdversarial),
            "forced-minimal" => Ok(GenStyle::ForcedMinimal),
            other => Err(format!("unknown style {other:?}")),
        }
    }
}

/// A random partial injection `[n] -> [n]` as a 0-null vector; `density` out
/// of 4 controls how many rows map.
fn partial_injection(rng: &mut SplitMix64, n: usize, density: u64) -> Vec<usize> {
    let mut out = vec![0usize; n];
    let mut free: Vec<usize> = (1..=n).collect();
    for slot in out.iter_mut() {
        if free.is_empty() || !rng.chance(density, 4) {
            continue;
        }
        let idx = rng.below(free.len());
        *slot = free.swap_remove(idx);
    }
    out
}

/// Deterministically generates an instance with the given parameters. The
/// same `(params, seed, style)` always yields the same tables.
pub fn gen_grid(params: GridParams, seed: u64, style: GenStyle) -> Result<GridInstance, GridError> {
    params.validate()?;
    let mut rng = SplitMix64::new(seed);
    let (n, m) = (params.n, params.m);
    let mut succ = vec![vec![0usize; m]; n];
    let mut pred = vec![vec![0usize; m]; n];

    if params.reversible {
        for y in 0..m - 1 {
            let col = match style {
                GenStyle::Random => partial_injection(&mut rng, n, 3),
                GenStyle::SinglePath => {
                    let mut col = vec![0usize; n];
                    // Extend exactly one chain; start it on row 1.
                    let from = if y == 0 { 1 } else { 1 + rng.below(n) };
                    col[from - 1] = 1 + rng.below(n);
                    col
                }
                GenStyle::LayeredAdversarial => partial_injection(&mut rng, n, 1),
                GenStyle::ForcedMinimal => vec![0usize; n],
            };
            for (x, &v) in col.iter().enumerate() {
                succ[x][y] = v;
                if v > 0 {
                    pred[v - 1][y + 1] = x + 1;
                }
            }
        }
    } else {
        match style {
            GenStyle::Random => {
                for row in succ.iter_mut() {
                    for cell in row.iter_mut().take(m - 1) {
                        *cell = rng.below(n + 1);
                    }
                }
            }
            GenStyle::SinglePath => {
                let mut x = 1;
                for y in 0..m - 1 {
                    let next = 1 + rng.below(n);
                    succ[x - 1][y] = next;
                    x = next;
                }
            }
            GenStyle::LayeredAdversarial => {
                // Whole columns funnel into one target: maximal merging.
                for y in 0..m - 1 {
                    let target = 1 + rng.below(n);
                    for (x, row) in succ.iter_mut().enumerate() {
                        if rng.chance(3, 4) || x == 0 {
                            row[y] = target;
                        }
                    }
                }
            }
            GenStyle::ForcedMinimal => {}
        }
    }
    GridInstance::from_tables(params, succ, params.reversible.then_some(pred))
}

/// Deterministically generates a line instance on `[v]` with `vstar = 1`.
pub fn gen_line(
    v: usize,
    seed: u64,
    style: GenStyle,
    flavor: LineFlavor,
) -> Result<LineInstance, LineError> {
    let mut rng = SplitMix64::new(seed);
    let succ: Vec<usize> = match style {
        GenStyle::Random | GenStyle::LayeredAdversarial => {
            let density = if style == GenStyle::Random { 3 } else { 1 };
            let mut s = partial_injection(&mut rng, v, density);
            for (i, cell) in s.iter_mut().enumerate() {
                if *cell == i + 1 {
                    *cell = 0; // fixed points never survive wrapping
                }
            }
            s
        }
        GenStyle::SinglePath => (0..v).map(|i| if i + 1 < v { i + 2 } else { 0 }).collect(),
        GenStyle::ForcedMinimal => vec![0; v],
    };
    let mut pred = vec![0usize; v];
    for (i, &s) in succ.iter().enumerate() {
        if s > 0 {
            pred[s - 1] = i + 1;
        }
    }
    LineInstance::from_tables(succ, pred, 1, flavor)
}
