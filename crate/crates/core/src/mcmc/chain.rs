use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::HomMap;

/// Starting configuration of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// Every free site gets this spin. Needs a loop at the spin unless the
    /// board has no edges.
    Constant(u8),
    /// Spin `even` on even sites and `odd` on odd sites of a bipartite
    /// board.
    Parity {
        even: u8,
        odd: u8,
    },
    /// Sites in random order, each given a uniformly random spin that is
    /// legal against the neighbours assigned so far. Retried on dead ends.
    RandomGreedy,
    Given(HomMap),
}

impl Init {
    /// Occupied on one sublattice and vacant on the other, for graphs with
    /// a vacant spin (see [`vacant_spin`]). The occupied spin is the lowest
    /// other spin.
    pub fn sublattice(h: &ConstraintGraph, even_occupied: bool) -> Result<Self> {
        let vacant = vacant_spin(h).ok_or_else(|| Error::Invalid("constraint graph has no vacant spin".into()))?;
        let occupied = (0..h.q() as u8)
            .find(|&j| j != vacant)
            .ok_or_else(|| Error::Invalid("constraint graph has a single spin".into()))?;
        Ok(if even_occupied {
            Init::Parity { even: occupied, odd: vacant }
        } else {
            Init::Parity { even: vacant, odd: occupied }
        })
    }
}

/// The lowest looped spin adjacent to every spin, if any. Sites holding it
/// count as unoccupied (the empty site for hard-core, yellow for the hinge).
pub fn vacant_spin(h: &ConstraintGraph) -> Option<u8> {
    (0..h.q()).find(|&j| h.row(j) == h.node_mask()).map(|j| j as u8)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// Heat bath over the legal-spin mask.
    General,
    /// Hard-core coin: vacate if a neighbour is occupied, otherwise occupy
    /// with probability `λ_occ/(λ_occ + λ_empty)`.
    HardCore,
}

/// Single-site heat-bath chain on `hom(G, H)`.
///
/// Each update draws one `u64` from ChaCha8 (seeded with `seed_from_u64`,
/// stream = replica index). The high 32 bits pick a free site by
/// multiply-shift, the low 32 bits give a coin `c = lo / 2^32`. The new
/// spin is the first legal `j` (ascending) with `Σ_{i<=j} λ_i > c · Σ λ`,
/// sums over legal spins only. Both kernels follow this rule bit for bit.
#[derive(Clone, Debug)]
pub struct Chain {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    rows: Vec<u64>,
    node_mask: u64,
    lambda: Vec<f64>,
    hard_core_total: f64,
    kernel: Kernel,
    spins: Vec<u8>,
    free: Vec<u32>,
    parity: Option<Vec<bool>>,
    counts: Vec<u32>,
    even_counts: Vec<u32>,
    rng: ChaCha8Rng,
    steps: u64,
    changes: u64,
}

impl Chain {
    /// Builds a chain from a starting configuration. Pins override `init`
    /// at their sites and are never updated.
    pub fn new(
        g: &Board,
        h: &ConstraintGraph,
        lambda: &[f64],
        init: &Init,
        pins: &[(usize, u8)],
        seed: u64,
        replica: u64,
    ) -> Result<Self> {
        let q = h.q();
        if lambda.len() != q {
            return Err(Error::LengthMismatch { expected: q, got: lambda.len() });
        }
        if let Some(i) = lambda.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::NonPositive(i));
        }
        let n = g.n_sites();
        if n > u32::MAX as usize {
            return Err(Error::InvalidSize("board too large for the sampler".into()));
        }
        let mut pinned = vec![None; n];
        for &(s, c) in pins {
            if s >= n {
                return Err(Error::IndexOutOfRange { index: s, len: n });
            }
            if c as usize >= q {
                return Err(Error::IndexOutOfRange { index: c as usize, len: q });
            }
            pinned[s] = Some(c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replica);
        let parity = g.parity();
        let spins = initial_spins(g, h, init, &pinned, parity.as_deref(), &mut rng)?;
        HomMap::new(spins.clone()).validate(g, h)?;

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.edges().len());
        offsets.push(0u32);
        for s in 0..n {
            targets.extend_from_slice(g.neighbors(s));
            offsets.push(targets.len() as u32);
        }
        let mut counts = vec![0u32; q];
        let mut even_counts = vec![0u32; q];
        for (s, &c) in spins.iter().enumerate() {
            counts[c as usize] += 1;
            if parity.as_ref().is_some_and(|p| !p[s]) {
                even_counts[c as usize] += 1;
            }
        }
        let kernel = if h.is_hard_core() { Kernel::HardCore } else { Kernel::General };
        Ok(Self {
            offsets,
            targets,
            rows: h.rows().to_vec(),
            node_mask: h.node_mask(),
            hard_core_total: if q == 2 { 0.0 + lambda[0] + lambda[1] } else { 0.0 },
            lambda: lambda.to_vec(),
            kernel,
            spins,
            free: (0..n as u32).filter(|&s| pinned[s as usize].is_none()).collect(),
            parity,
            counts,
            even_counts,
            rng,
            steps: 0,
            changes: 0,
        })
    }

    /// Forces the general heat-bath kernel even for hard-core.
    pub fn with_kernel(mut self, kernel: Kernel) -> Result<Self> {
        if kernel == Kernel::HardCore && self.kernel != Kernel::HardCore {
            return Err(Error::Invalid("hard-core kernel needs the hard-core constraint graph".into()));
        }
        self.kernel = kernel;
        Ok(self)
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn spins(&self) -> &[u8] {
        &self.spins
    }

    pub fn map(&self) -> HomMap {
        HomMap::new(self.spins.clone())
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Updates that changed a spin.
    pub fn changes(&self) -> u64 {
        self.changes
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    /// Sites currently holding each spin.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Even sites holding each spin, when the board is bipartite.
    pub fn even_counts(&self) -> Option<&[u32]> {
        self.parity.as_ref().map(|_| &self.even_counts[..])
    }

    fn legal(&self, site: usize) -> u64 {
        let (a, b) = (self.offsets[site] as usize, self.offsets[site + 1] as usize);
        self.targets[a..b].iter().fold(self.node_mask, |m, &v| m & self.rows[self.spins[v as usize] as usize])
    }

    /// One single-site update. No-op when every site is pinned.
    #[inline]
    pub fn step(&mut self) {
        let nf = self.free.len() as u64;
        if nf == 0 {
            return;
        }
        let x = self.rng.next_u64();
        let site = self.free[(((x >> 32) * nf) >> 32) as usize] as usize;
        let coin = (x as u32) as f64 * (1.0 / 4_294_967_296.0);
        let new = match self.kernel {
            Kernel::HardCore => {
                let (a, b) = (self.offsets[site] as usize, self.offsets[site + 1] as usize);
                if self.targets[a..b].iter().any(|&v| self.spins[v as usize] == 0) {
                    1
                } else if self.lambda[0] > coin * self.hard_core_total {
                    0
                } else {
                    1
                }
            }
            Kernel::General => {
                let legal = self.legal(site);
                debug_assert!(legal & (1u64 << self.spins[site]) != 0, "current spin must stay legal");
                let total = bits(legal).fold(0.0, |t, j| t + self.lambda[j]);
                let target = coin * total;
                let mut cum = 0.0;
                let mut pick = 63 - legal.leading_zeros() as usize;
                for j in bits(legal) {
                    cum += self.lambda[j];
                    if cum > target {
                        pick = j;
                        break;
                    }
                }
                pick as u8
            }
        };
        self.steps += 1;
        let old = self.spins[site];
        if new != old {
            self.changes += 1;
            self.spins[site] = new;
            self.counts[old as usize] -= 1;
            self.counts[new as usize] += 1;
            if self.parity.as_ref().is_some_and(|p| !p[site]) {
                self.even_counts[old as usize] -= 1;
                self.even_counts[new as usize] += 1;
            }
        }
    }

    /// `n_free` updates.
    pub fn sweep(&mut self) {
        for _ in 0..self.free.len() {
            self.step();
        }
        debug_assert!(self.is_valid(), "chain left hom(G, H)");
    }

    fn is_valid(&self) -> bool {
        (0..self.spins.len()).all(|s| self.legal(s) & (1u64 << self.spins[s]) != 0)
    }
}

fn initial_spins(
    g: &Board,
    h: &ConstraintGraph,
    init: &Init,
    pinned: &[Option<u8>],
    parity: Option<&[bool]>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u8>> {
    let n = g.n_sites();
    let q = h.q();
    let check_spin = |c: u8| {
        if (c as usize) < q {
            Ok(c)
        } else {
            Err(Error::IndexOutOfRange { index: c as usize, len: q })
        }
    };
    let mut spins = match init {
        Init::Constant(c) => vec![check_spin(*c)?; n],
        Init::Parity { even, odd } => {
            let p = parity.ok_or(Error::BoardNotBipartite)?;
            let (e, o) = (check_spin(*even)?, check_spin(*odd)?);
            p.iter().map(|&odd_site| if odd_site { o } else { e }).collect()
        }
        Init::Given(m) => {
            if m.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: m.len() });
            }
            m.spins().to_vec()
        }
        Init::RandomGreedy => return random_greedy(g, h, pinned, rng),
    };
    for (s, p) in pinned.iter().enumerate() {
        if let Some(c) = p {
            spins[s] = *c;
        }
    }
    Ok(spins)
}

fn random_greedy(g: &Board, h: &ConstraintGraph, pinned: &[Option<u8>], rng: &mut ChaCha8Rng) -> Result<Vec<u8>> {
    const ATTEMPTS: usize = 64;
    let n = g.n_sites();
    let mut order: Vec<usize> = (0..n).filter(|&s| pinned[s].is_none()).collect();
    'attempt: for _ in 0..ATTEMPTS {
        order.shuffle(rng);
        let mut spins: Vec<Option<u8>> = pinned.to_vec();
        for &s in &order {
            let legal = g
                .neighbors(s)
                .iter()
                .filter_map(|&v| spins[v as usize])
                .fold(h.node_mask(), |m, c| m & h.row(c as usize));
            let options: Vec<usize> = bits(legal).collect();
            if options.is_empty() {
                continue 'attempt;
            }
            spins[s] = Some(options[rng.random_range(0..options.len())] as u8);
        }
        return Ok(spins.into_iter().map(Option::unwrap).collect());
    }
    Err(Error::Invalid(format!("random greedy initialisation failed {ATTEMPTS} times")))
}
