//! Two Ising-coupled spin-½ particles, spin 1 coupled to one or two bosonic
//! field modes in the rotating-wave approximation:
//!
//! ```text
//! H = ω/2 (σ₁ᶻ + σ₂ᶻ) + ν a†a + λ (σ₁⁺ a + σ₁⁻ a†) + J σ₁ᶻ σ₂ᶻ   [+ ν b†b]
//! ```
//!
//! Basis ordering is fixed: `index = spin1·(2·cutoff) + spin2·cutoff + n`
//! for one mode, with the second-mode photon count `n'` appended as the
//! fastest index for two modes. Spin index 0 is the excited state `e`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, UnitaryFlow};

pub const DEFAULT_CUTOFF: usize = 8;

/// Physical constants of the Hamiltonian. `lambda_c` is the natural frequency
/// unit but nothing here enforces `lambda_c = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub nu: f64,
    pub lambda_c: f64,
    pub j_c: f64,
}

impl ModelParams {
    pub fn new(omega: f64, nu: f64, lambda_c: f64, j_c: f64) -> Result<Self> {
        let p = Self { omega, nu, lambda_c, j_c };
        p.validate()?;
        Ok(p)
    }

    /// `ω = ν = λ = 1` with Ising coupling `j_c`.
    pub fn resonant(j_c: f64) -> Self {
        Self { omega: 1.0, nu: 1.0, lambda_c: 1.0, j_c }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("nu", self.nu), ("lambda_c", self.lambda_c), ("j_c", self.j_c)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if self.lambda_c < 0.0 {
            return Err(Error::InvalidParameter(format!("lambda_c must be >= 0, got {}", self.lambda_c)));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::resonant(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    E,
    G,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::E, Spin::G];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Spin::E => 0,
            Spin::G => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Spin::E
        } else {
            Spin::G
        }
    }

    /// Eigenvalue of σᶻ.
    #[inline]
    pub fn sz(self) -> f64 {
        match self {
            Spin::E => 1.0,
            Spin::G => -1.0,
        }
    }
}

/// `|spin1, spin2, n⟩` or `|spin1, spin2, n, n'⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub spin1: Spin,
    pub spin2: Spin,
    pub n: usize,
    pub nprime: Option<usize>,
}

impl BasisIndex {
    pub fn single(spin1: Spin, spin2: Spin, n: usize) -> Self {
        Self { spin1, spin2, n, nprime: None }
    }

    pub fn two_mode(spin1: Spin, spin2: Spin, n: usize, nprime: usize) -> Self {
        Self { spin1, spin2, n, nprime: Some(nprime) }
    }

    /// Position in the enumerated basis, or `None` if a photon count is at or
    /// above the cutoff.
    pub fn position(&self, cutoff: usize) -> Option<usize> {
        if self.n >= cutoff {
            return None;
        }
        match self.nprime {
            None => Some(self.spin1.index() * 2 * cutoff + self.spin2.index() * cutoff + self.n),
            Some(np) if np < cutoff => {
                let c2 = cutoff * cutoff;
                Some(self.spin1.index() * 2 * c2 + self.spin2.index() * c2 + self.n * cutoff + np)
            }
            Some(_) => None,
        }
    }

    pub fn from_single_position(pos: usize, cutoff: usize) -> Self {
        Self::single(Spin::from_index(pos / (2 * cutoff)), Spin::from_index((pos / cutoff) % 2), pos % cutoff)
    }

    pub fn from_two_mode_position(pos: usize, cutoff: usize) -> Self {
        let c2 = cutoff * cutoff;
        Self::two_mode(
            Spin::from_index(pos / (2 * c2)),
            Spin::from_index((pos / c2) % 2),
            (pos / cutoff) % cutoff,
            pos % cutoff,
        )
    }
}

/// Polarity of spin 2, which selects the conserved block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    /// spin 2 excited; carries levels 1 and 2, mixing angle α.
    Alpha,
    /// spin 2 ground; carries levels 3 and 4, mixing angle β.
    Beta,
}

impl Sector {
    pub fn spin2(self) -> Spin {
        match self {
            Sector::Alpha => Spin::E,
            Sector::Beta => Spin::G,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Alpha => "alpha",
            Sector::Beta => "beta",
        }
    }
}

/// A conserved two-dimensional block spanned by `{|e₁, y₂, n⟩, |g₁, y₂, n+1⟩}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SectorLabel {
    pub sector: Sector,
    pub n: usize,
}

impl SectorLabel {
    pub fn new(sector: Sector, n: usize) -> Self {
        Self { sector, n }
    }

    /// Basis positions `[|e₁, y₂, n⟩, |g₁, y₂, n+1⟩]` in the single-mode basis.
    pub fn indices(&self, cutoff: usize) -> Result<[usize; 2]> {
        if self.n + 1 >= cutoff {
            return Err(Error::SectorOutOfRange { n: self.n, cutoff });
        }
        let y = self.sector.spin2();
        let upper = BasisIndex::single(Spin::E, y, self.n).position(cutoff);
        let lower = BasisIndex::single(Spin::G, y, self.n + 1).position(cutoff);
        match (upper, lower) {
            (Some(a), Some(b)) => Ok([a, b]),
            _ => Err(Error::SectorOutOfRange { n: self.n, cutoff }),
        }
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        Err(Error::CutoffTooSmall { cutoff, required: 2 })
    } else {
        Ok(())
    }
}

/// Fills the spin and mode-a part of the Hamiltonian; `extra_diag` adds any
/// further diagonal energy for a basis state.
fn fill_hamiltonian(
    params: &ModelParams,
    dim: usize,
    decode: impl Fn(usize) -> BasisIndex,
    encode: impl Fn(BasisIndex) -> Option<usize>,
    extra_diag: impl Fn(&BasisIndex) -> f64,
) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for pos in 0..dim {
        let s = decode(pos);
        let diag = 0.5 * params.omega * (s.spin1.sz() + s.spin2.sz())
            + params.nu * s.n as f64
            + params.j_c * s.spin1.sz() * s.spin2.sz()
            + extra_diag(&s);
        h[(pos, pos)] = C64::new(diag, 0.0);
        // λ σ₁⁻ a† : |e₁, n⟩ -> √(n+1) |g₁, n+1⟩, plus its adjoint σ₁⁺ a.
        if s.spin1 == Spin::E {
            let target = BasisIndex { spin1: Spin::G, n: s.n + 1, ..s };
            if let Some(t) = encode(target) {
                let amp = C64::new(params.lambda_c * ((s.n + 1) as f64).sqrt(), 0.0);
                h[(t, pos)] = amp;
                h[(pos, t)] = amp;
            }
        }
    }
    h
}

/// Single-mode Hamiltonian on `spin1 ⊗ spin2 ⊗ Fock(cutoff)`, dimension `4·cutoff`.
pub fn build_hamiltonian(params: &ModelParams, cutoff: usize) -> Result<ComplexMatrix> {
    check_cutoff(cutoff)?;
    params.validate()?;
    Ok(fill_hamiltonian(
        params,
        4 * cutoff,
        |p| BasisIndex::from_single_position(p, cutoff),
        |b| b.position(cutoff),
        |_| 0.0,
    ))
}

/// Adds an uncoupled second mode `ν b†b`; dimension `4·cutoff²`.
pub fn build_two_mode_hamiltonian(params: &ModelParams, cutoff: usize) -> Result<ComplexMatrix> {
    check_cutoff(cutoff)?;
    params.validate()?;
    Ok(fill_hamiltonian(
        params,
        4 * cutoff * cutoff,
        |p| BasisIndex::from_two_mode_position(p, cutoff),
        |b| b.position(cutoff),
        |s| params.nu * s.nprime.unwrap_or(0) as f64,
    ))
}

/// The space a field operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpace {
    /// Bare Fock space of one mode, dimension `cutoff`.
    Fock,
    /// Mode a inside the single-mode composite space.
    SingleMode,
    /// Mode a inside the two-mode composite space.
    TwoModeA,
    /// Mode b inside the two-mode composite space.
    TwoModeB,
}

impl FieldSpace {
    pub fn dim(self, cutoff: usize) -> usize {
        match self {
            FieldSpace::Fock => cutoff,
            FieldSpace::SingleMode => 4 * cutoff,
            FieldSpace::TwoModeA | FieldSpace::TwoModeB => 4 * cutoff * cutoff,
        }
    }

    /// Photon count of the chosen mode at each basis position.
    pub fn photon_counts(self, cutoff: usize) -> Vec<usize> {
        (0..self.dim(cutoff))
            .map(|p| match self {
                FieldSpace::Fock => p,
                FieldSpace::SingleMode => p % cutoff,
                FieldSpace::TwoModeA => (p / cutoff) % cutoff,
                FieldSpace::TwoModeB => p % cutoff,
            })
            .collect()
    }
}

/// Number operator of the chosen mode.
pub fn number_operator(cutoff: usize, space: FieldSpace) -> ComplexMatrix {
    let counts: Vec<f64> = space.photon_counts(cutoff).into_iter().map(|n| n as f64).collect();
    ComplexMatrix::real_diagonal(&counts)
}

/// `U(φ) = exp(-iφ a†a)` on the chosen mode, identity on everything else.
pub fn phase_shift_unitary(phi: f64, cutoff: usize, space: FieldSpace) -> ComplexMatrix {
    let entries: Vec<C64> =
        space.photon_counts(cutoff).into_iter().map(|n| C64::from_polar(1.0, -phi * n as f64)).collect();
    ComplexMatrix::diagonal(&entries)
}

/// `N_exc = a†a + |e₁⟩⟨e₁|` on the single-mode space.
pub fn excitation_number(cutoff: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..4 * cutoff)
        .map(|p| {
            let b = BasisIndex::from_single_position(p, cutoff);
            b.n as f64 + if b.spin1 == Spin::E { 1.0 } else { 0.0 }
        })
        .collect();
    ComplexMatrix::real_diagonal(&d)
}

/// `a†a + b†b + |e₁⟩⟨e₁|` on the two-mode space.
pub fn two_mode_excitation_number(cutoff: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..4 * cutoff * cutoff)
        .map(|p| {
            let b = BasisIndex::from_two_mode_position(p, cutoff);
            (b.n + b.nprime.unwrap_or(0)) as f64 + if b.spin1 == Spin::E { 1.0 } else { 0.0 }
        })
        .collect();
    ComplexMatrix::real_diagonal(&d)
}

/// σ₂ᶻ on the single-mode space.
pub fn spin2_z(cutoff: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..4 * cutoff).map(|p| BasisIndex::from_single_position(p, cutoff).spin2.sz()).collect();
    ComplexMatrix::real_diagonal(&d)
}

/// `J_z = (a†a - b†b)/2` on the two-mode Fock space (dimension `cutoff²`).
pub fn schwinger_jz(cutoff: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..cutoff * cutoff).map(|p| 0.5 * ((p / cutoff) as f64 - (p % cutoff) as f64)).collect();
    ComplexMatrix::real_diagonal(&d)
}

/// `J_y = (a†b - a b†)/(2i)` on the two-mode Fock space, truncated at `cutoff`
/// photons per mode.
pub fn schwinger_jy(cutoff: usize) -> ComplexMatrix {
    let idx = |na: usize, nb: usize| na * cutoff + nb;
    let mut m = ComplexMatrix::zeros(cutoff * cutoff, cutoff * cutoff);
    for na in 0..cutoff {
        for nb in 0..cutoff {
            if nb > 0 && na + 1 < cutoff {
                // a†b/(2i): |na, nb> -> -i/2 √((na+1) nb) |na+1, nb-1>
                let amp = ((na + 1) as f64 * nb as f64).sqrt();
                m[(idx(na + 1, nb - 1), idx(na, nb))] += C64::new(0.0, -0.5 * amp);
            }
            if na > 0 && nb + 1 < cutoff {
                // -a b†/(2i): |na, nb> -> +i/2 √(na (nb+1)) |na-1, nb+1>
                let amp = (na as f64 * (nb + 1) as f64).sqrt();
                m[(idx(na - 1, nb + 1), idx(na, nb))] += C64::new(0.0, 0.5 * amp);
            }
        }
    }
    m
}

/// `U(θ, φ) = exp(-iφ J_z) exp(-iθ J_y)` on the bare two-mode Fock space.
pub fn two_mode_rotation_fock(theta: f64, phi: f64, cutoff: usize) -> Result<ComplexMatrix> {
    let rot = UnitaryFlow::new(&schwinger_jy(cutoff))?.at(theta);
    let jz_phase: Vec<C64> = (0..cutoff * cutoff)
        .map(|p| C64::from_polar(1.0, -phi * 0.5 * ((p / cutoff) as f64 - (p % cutoff) as f64)))
        .collect();
    Ok(&ComplexMatrix::diagonal(&jz_phase) * &rot)
}

/// `U(θ, φ)` embedded in the two-mode composite space (identity on both spins).
pub fn two_mode_rotation(theta: f64, phi: f64, cutoff: usize) -> Result<ComplexMatrix> {
    check_cutoff(cutoff)?;
    Ok(ComplexMatrix::identity(4).kron(&two_mode_rotation_fock(theta, phi, cutoff)?))
}

/// The 2x2 block of a single-mode operator on `{|e₁, y₂, n⟩, |g₁, y₂, n+1⟩}`.
///
/// The cutoff is inferred from the dimension of `h` (`4·cutoff`).
pub fn extract_sector(h: &ComplexMatrix, label: SectorLabel) -> Result<ComplexMatrix> {
    let dim = h.ensure_square()?;
    if dim % 4 != 0 {
        return Err(Error::DimensionMismatch { expected: 4 * (dim / 4 + 1), found: dim });
    }
    let idx = label.indices(dim / 4)?;
    Ok(h.submatrix(&idx))
}
