//! The flatness decision drivers.
//!
//! A module `F` finitely presented over `A = R[x..]/I` with `R = Q[y1..yn]`
//! is `R`-flat exactly when the `n`-fold tensor power of `F` over `R` has no
//! `R`-torsion. The drivers here form that power, run the torsion
//! computation and wrap the outcome in a [`FlatnessVerdict`]: `Flat` and
//! `NotFlat` are authoritative at power `n`; testing a smaller power can
//! only ever be authoritative in the negative direction (torsion at any
//! power already refutes flatness), so a clean run below `n` reports
//! `Inconclusive`. Resource blow-ups are folded into the verdict rather than
//! raised, while certificate inconsistencies are raised loudly: they mean
//! the engine contradicted itself.
//!
//! `flat_at_origin` decides the same question locally at the origin of the
//! source: torsion survives localization at a maximal ideal exactly when its
//! annihilator over the full polynomial ring is contained in that ideal, so
//! after the global torsion module is computed, the only extra work is an
//! annihilator intersection and an evaluation of its generators at zero.

use crate::ideal_ops::{colon, intersect};
use crate::limits::{Budget, EngineError, EngineStats, LimitKind};
use crate::polynomial::Coef;
use crate::presentation::ModulePresentation;
use crate::torsion::{make_certificate, torsion_submodule, CertificateError, TorsionCertificate};
use crate::vector::FreeVector;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Zero;

/// A flatness question: the presented module of a ring tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessProblem {
    pub presentation: ModulePresentation,
}

impl FlatnessProblem {
    pub fn new(presentation: ModulePresentation) -> Self {
        FlatnessProblem { presentation }
    }

    /// Number of base coordinates; the authoritative tensor power.
    pub fn base_dimension(&self) -> usize {
        self.presentation.vars().n_base()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatnessStatus {
    Flat,
    NotFlat,
    /// A clean torsion-free run below the authoritative power.
    Inconclusive,
    /// The computation hit a resource cap before reaching a verdict.
    ResourceExceeded,
}

impl fmt::Display for FlatnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FlatnessStatus::Flat => "flat",
            FlatnessStatus::NotFlat => "notflat",
            FlatnessStatus::Inconclusive => "inconclusive",
            FlatnessStatus::ResourceExceeded => "resource-exceeded",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Global,
    AtOrigin,
}

/// Outcome of a flatness check, with everything a report needs.
#[derive(Clone, Debug)]
pub struct FlatnessVerdict {
    pub status: FlatnessStatus,
    pub scope: Scope,
    /// Tensor power actually tested; 0 when no tensor power was needed.
    pub power_used: u32,
    /// False exactly for `Inconclusive`: the tested power was below the base
    /// dimension and no torsion appeared.
    pub authoritative: bool,
    /// The module collapsed to zero; trivially flat.
    pub zero_module: bool,
    pub certificate: Option<TorsionCertificate>,
    /// The tensor power the certificate lives in, for display and
    /// cross-checks.
    pub witness_module: Option<ModulePresentation>,
    pub limit: Option<LimitKind>,
    pub stats: EngineStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatnessError {
    /// `flat_at_origin` requires the origin to lie on the zero set of the
    /// algebra ideal.
    OriginOffVariety,
    Certificate(CertificateError),
}

impl From<CertificateError> for FlatnessError {
    fn from(e: CertificateError) -> Self {
        FlatnessError::Certificate(e)
    }
}

impl fmt::Display for FlatnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatnessError::OriginOffVariety => {
                write!(f, "the origin does not lie on the zero set of the algebra ideal")
            }
            FlatnessError::Certificate(e) => write!(f, "{e}"),
        }
    }
}

fn verdict(
    status: FlatnessStatus,
    scope: Scope,
    power_used: u32,
    authoritative: bool,
    budget: &Budget<'_>,
) -> FlatnessVerdict {
    FlatnessVerdict {
        status,
        scope,
        power_used,
        authoritative,
        zero_module: false,
        certificate: None,
        witness_module: None,
        limit: None,
        stats: budget.stats.clone(),
    }
}

/// Decides `R`-flatness of the problem's module. `power_override` tests a
/// specific tensor power instead of the authoritative `n`.
pub fn flat_check(
    problem: &FlatnessProblem,
    power_override: Option<u32>,
    budget: &mut Budget<'_>,
) -> Result<FlatnessVerdict, FlatnessError> {
    let n = problem.base_dimension() as u32;
    if n == 0 {
        // The base is Q itself; modules over a field are flat.
        return Ok(verdict(FlatnessStatus::Flat, Scope::Global, 0, true, budget));
    }
    let power = power_override.unwrap_or(n).max(1);

    match problem.presentation.is_zero_module(budget) {
        Ok(true) => {
            let mut v = verdict(FlatnessStatus::Flat, Scope::Global, 0, true, budget);
            v.zero_module = true;
            return Ok(v);
        }
        Ok(false) => {}
        Err(EngineError::ResourceExceeded(k)) => {
            let mut v = verdict(FlatnessStatus::ResourceExceeded, Scope::Global, 0, false, budget);
            v.limit = Some(k);
            return Ok(v);
        }
    }

    let tensor = problem
        .presentation
        .tensor_power(power)
        .expect("positive power over one base");
    let authoritative = power >= n;
    match torsion_submodule(&tensor, budget) {
        Err(EngineError::ResourceExceeded(k)) => {
            let mut v = verdict(FlatnessStatus::ResourceExceeded, Scope::Global, power, false, budget);
            v.limit = Some(k);
            Ok(v)
        }
        Ok(t) if t.generators.is_empty() => {
            let status = if authoritative {
                FlatnessStatus::Flat
            } else {
                FlatnessStatus::Inconclusive
            };
            Ok(verdict(status, Scope::Global, power, authoritative, budget))
        }
        Ok(t) => {
            // Torsion at any power refutes flatness.
            let cert = make_certificate(&tensor, &t.generators[0], budget)?;
            let mut v = verdict(FlatnessStatus::NotFlat, Scope::Global, power, true, budget);
            v.certificate = Some(cert);
            v.witness_module = Some(tensor);
            Ok(v)
        }
    }
}

/// The least tensor power at which torsion appears, scanning 1 through `n`;
/// `None` when all powers up to `n` are torsion-free (i.e. the module is
/// flat).
pub fn first_torsion_power(
    problem: &FlatnessProblem,
    budget: &mut Budget<'_>,
) -> Result<Option<u32>, EngineError> {
    let n = problem.base_dimension() as u32;
    for k in 1..=n {
        let tensor = problem
            .presentation
            .tensor_power(k)
            .expect("positive power over one base");
        let t = torsion_submodule(&tensor, budget)?;
        if !t.generators.is_empty() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Decides flatness at the origin of the source. Precondition: the origin
/// lies on the zero set of the algebra ideal (module rows are not part of
/// that check; they cut the module, not the space).
pub fn flat_at_origin(
    problem: &FlatnessProblem,
    budget: &mut Budget<'_>,
) -> Result<FlatnessVerdict, FlatnessError> {
    let pres = &problem.presentation;
    let vars = pres.vars();
    let zero_point: Vec<Coef> = alloc::vec![Coef::zero(); vars.len()];
    if pres
        .tower()
        .relations()
        .iter()
        .any(|g| !g.evaluate_full(&zero_point).is_zero())
    {
        return Err(FlatnessError::OriginOffVariety);
    }
    let n = problem.base_dimension() as u32;
    if n == 0 {
        return Ok(verdict(FlatnessStatus::Flat, Scope::AtOrigin, 0, true, budget));
    }
    match pres.is_zero_module(budget) {
        Ok(true) => {
            let mut v = verdict(FlatnessStatus::Flat, Scope::AtOrigin, 0, true, budget);
            v.zero_module = true;
            return Ok(v);
        }
        Ok(false) => {}
        Err(EngineError::ResourceExceeded(k)) => {
            let mut v = verdict(FlatnessStatus::ResourceExceeded, Scope::AtOrigin, 0, false, budget);
            v.limit = Some(k);
            return Ok(v);
        }
    }
    let tensor = pres.tensor_power(n).expect("positive power over one base");
    let rank = tensor.rank();
    let tvars = tensor.vars();
    let run = (|| -> Result<Option<FlatnessVerdict>, EngineError> {
        let t = torsion_submodule(&tensor, budget)?;
        if t.generators.is_empty() {
            return Ok(Some(verdict(
                FlatnessStatus::Flat,
                Scope::AtOrigin,
                n,
                true,
                budget,
            )));
        }
        // Annihilator of the torsion module over the full polynomial ring:
        // the intersection of the annihilators of its generators. Torsion
        // survives localization at the origin iff every generator of that
        // ideal vanishes there.
        let mut ann: Option<Vec<FreeVector>> = None;
        for g in &t.generators {
            let this: Vec<FreeVector> = colon(tvars, rank, tensor.relations(), g, budget)?
                .into_iter()
                .map(FreeVector::scalar)
                .collect();
            ann = Some(match ann {
                None => this,
                Some(acc) => intersect(tvars, 1, &acc, &this, budget)?,
            });
        }
        let ann = ann.expect("at least one torsion generator");
        debug_assert!(!ann.is_empty(), "torsion annihilator cannot be zero");
        let origin: Vec<Coef> = alloc::vec![Coef::zero(); tvars.len()];
        let supported_at_origin = ann
            .iter()
            .all(|v| v.expect_scalar().evaluate_full(&origin).is_zero());
        if supported_at_origin {
            Ok(None)
        } else {
            Ok(Some(verdict(
                FlatnessStatus::Flat,
                Scope::AtOrigin,
                n,
                true,
                budget,
            )))
        }
    })();
    match run {
        Err(EngineError::ResourceExceeded(k)) => {
            let mut v = verdict(FlatnessStatus::ResourceExceeded, Scope::AtOrigin, n, false, budget);
            v.limit = Some(k);
            Ok(v)
        }
        Ok(Some(v)) => Ok(v),
        Ok(None) => {
            // Supported at the origin: not flat there. Attach the global
            // witness; its torsion class is the obstruction that survives.
            let t = torsion_submodule(&tensor, budget)
                .expect("torsion recomputation after a successful run");
            let cert = make_certificate(&tensor, &t.generators[0], budget)?;
            let mut v = verdict(FlatnessStatus::NotFlat, Scope::AtOrigin, n, true, budget);
            v.certificate = Some(cert);
            v.witness_module = Some(tensor);
            Ok(v)
        }
    }
}
