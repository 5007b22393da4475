use std::fmt;

use crate::algebra::{primality_oracle, AlgIdeal, MonomialOrder, PrimalityConfig, PrimalityVerdict, PrimeMethod, PrimeStatus};
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::ranking::Ranking;
use crate::reduction::{AutoreduceRejection, CoherenceReport, RankedSystem, ReductionCertificate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectionStage {
    Autoreduce(AutoreduceRejection),
    Coherence,
    Primality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Certified,
    /// Primality was undecided or accepted on the user's assertion.
    Conditional,
    Rejected(RejectionStage),
}

impl CertStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CertStatus::Certified => "certified",
            CertStatus::Conditional => "conditional",
            CertStatus::Rejected(_) => "rejected",
        }
    }

    pub fn is_usable(&self) -> bool {
        !matches!(self, CertStatus::Rejected(_))
    }
}

impl fmt::Display for RejectionStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectionStage::Autoreduce(r) => write!(f, "autoreduced ({r})"),
            RejectionStage::Coherence => write!(f, "coherence"),
            RejectionStage::Primality => write!(f, "primality"),
        }
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Rejected(stage) => write!(f, "rejected at {stage}"),
            other => f.write_str(other.label()),
        }
    }
}

/// Evidence that a finite set is a characteristic set of a prime
/// differential ideal.
#[derive(Clone, Debug)]
pub struct CharSetCertificate {
    pub input: Vec<DiffPoly>,
    pub ranking: Ranking,
    pub system: Option<RankedSystem>,
    pub coherence: Option<CoherenceReport>,
    /// The ideal (Λ) over exactly the derivatives occurring in Λ.
    pub ideal: Option<AlgIdeal>,
    /// Verdict for (Λ) itself.
    pub algebraic_primality: Option<PrimalityVerdict>,
    /// Whether H_Λ lies in (Λ).
    pub h_in_ideal: Option<bool>,
    /// Verdict for (Λ):H_Λ^∞, computed when (Λ) is not shown prime.
    pub saturation_primality: Option<PrimalityVerdict>,
    pub status: CertStatus,
}

impl CharSetCertificate {
    pub fn system(&self) -> Result<&RankedSystem> {
        match (&self.status, &self.system) {
            (CertStatus::Rejected(stage), _) => Err(Error::RejectedCertificate(format!("rejected at {stage}"))),
            (_, Some(s)) => Ok(s),
            (_, None) => Err(Error::RejectedCertificate("no ranked system".into())),
        }
    }

    /// The verdict that decided the status.
    pub fn deciding_verdict(&self) -> Option<&PrimalityVerdict> {
        self.saturation_primality.as_ref().or(self.algebraic_primality.as_ref())
    }

    /// Recompute every stage from the stored parts and compare.
    pub fn verify(&self, cfg: &PrimalityConfig) -> Result<bool> {
        let again = charset_certify_with(&self.input, &self.ranking, cfg, Exec::Sequential);
        if again.status != self.status || again.system != self.system || again.coherence != self.coherence {
            return Ok(false);
        }
        for (v, ideal) in [
            (&self.algebraic_primality, self.ideal.clone()),
            (
                &self.saturation_primality,
                match (&self.ideal, &self.system) {
                    (Some(i), Some(s)) => Some(i.saturate(s.h_product())?),
                    _ => None,
                },
            ),
        ] {
            if let (Some(v), Some(i)) = (v, ideal) {
                if !v.verify(&i)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn charset_certify(s: &[DiffPoly], ranking: &Ranking, cfg: &PrimalityConfig) -> CharSetCertificate {
    charset_certify_with(s, ranking, cfg, Exec::default())
}

fn primality_status(v: &PrimalityVerdict) -> CertStatus {
    match (v.status, v.method) {
        (PrimeStatus::Prime, Some(PrimeMethod::Certificate)) => CertStatus::Conditional,
        (PrimeStatus::Prime, _) => CertStatus::Certified,
        (PrimeStatus::NotPrime, _) => CertStatus::Rejected(RejectionStage::Primality),
        (PrimeStatus::Unknown, _) => CertStatus::Conditional,
    }
}

/// Autoreduced check, then coherence, then primality of (Λ); when (Λ) is not
/// shown prime the decision falls to (Λ):H_Λ^∞.
pub fn charset_certify_with(s: &[DiffPoly], ranking: &Ranking, cfg: &PrimalityConfig, exec: Exec) -> CharSetCertificate {
    let mut cert = CharSetCertificate {
        input: s.to_vec(),
        ranking: ranking.clone(),
        system: None,
        coherence: None,
        ideal: None,
        algebraic_primality: None,
        h_in_ideal: None,
        saturation_primality: None,
        status: CertStatus::Certified,
    };
    let sys = match RankedSystem::autoreduced_check(s, ranking) {
        Ok(sys) => sys,
        Err(r) => {
            cert.status = CertStatus::Rejected(RejectionStage::Autoreduce(r));
            return cert;
        }
    };
    let coh = sys.coherence_check_with(exec);
    let coherent = coh.coherent;
    cert.system = Some(sys.clone());
    cert.coherence = Some(coh);
    if !coherent {
        cert.status = CertStatus::Rejected(RejectionStage::Coherence);
        return cert;
    }
    let ideal = AlgIdeal::from_gens(sys.polys(), MonomialOrder::GRevLex).buchberger_with(exec);
    let verdict = primality_oracle(&ideal, cfg).expect("ideal variables are closed");
    let h = sys.h_product();
    let h_in = ideal.contains(h).expect("H uses the ideal's variables");
    cert.h_in_ideal = Some(h_in);
    cert.ideal = Some(ideal.clone());
    let shown_prime = verdict.status == PrimeStatus::Prime && verdict.method != Some(PrimeMethod::Certificate);
    cert.status = if shown_prime && !h_in {
        CertStatus::Certified
    } else {
        let sat = ideal.saturate(h).expect("H uses the ideal's variables");
        let sv = primality_oracle(&sat, cfg).expect("ideal variables are closed");
        let st = primality_status(&sv);
        cert.saturation_primality = Some(sv);
        st
    };
    cert.algebraic_primality = Some(verdict);
    cert
}

/// Membership in [Λ]:H_Λ^∞, proved by a full reduction to zero.
pub fn sat_ideal_member(f: &DiffPoly, cert: &CharSetCertificate) -> Result<(bool, ReductionCertificate)> {
    let sys = cert.system()?;
    let rc = sys.full_reduce(f);
    if !rc.verify(f, sys) {
        return Err(Error::RejectedCertificate("reduction certificate failed to verify".into()));
    }
    Ok((rc.remainder.is_zero(), rc))
}
