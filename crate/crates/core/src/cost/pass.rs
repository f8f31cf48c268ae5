//! Off-chip traffic and arithmetic intensity of one homomorphic (I)DFT pass.

use super::keyswitch::{keyswitch_mults, of_limb_mults, pmult_mults, rescale_mults};
use super::profile::{MachineProfile, ParamProfile};
use crate::error::{Error, Result};
use crate::hdft::{DftDirection, EncodedDftPlan, EvkUsageLog, HdftRun, Variant};

/// What one iteration of a pass does, and at which level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationDesc {
    /// working level before the iteration's rescale
    pub level: usize,
    pub hrots: usize,
    pub pmults: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassDescription {
    pub label: String,
    pub iterations: Vec<IterationDesc>,
}

impl PassDescription {
    pub fn new(label: &str, levels: &[usize], hrots: &[usize], pmults: &[usize]) -> Result<Self> {
        if levels.len() != hrots.len() || levels.len() != pmults.len() {
            return Err(Error::Schedule(format!(
                "{} levels, {} rotation counts and {} multiplication counts",
                levels.len(),
                hrots.len(),
                pmults.len()
            )));
        }
        let iterations = levels
            .iter()
            .zip(hrots)
            .zip(pmults)
            .map(|((&level, &hrots), &pmults)| IterationDesc { level, hrots, pmults })
            .collect();
        Ok(PassDescription {
            label: label.to_string(),
            iterations,
        })
    }

    /// Three radix-32 iterations over 2^15 slots: 40 rotations and 158
    /// plaintext products, with the inverse transform at the top of the
    /// modulus chain and the forward transform at the bottom.
    pub fn ark(direction: DftDirection) -> Self {
        let levels: &[usize] = match direction {
            DftDirection::Idft => &[23, 22, 21],
            DftDirection::Dft => &[3, 2, 1],
        };
        Self::new(direction.name(), levels, &[14, 13, 13], &[53, 53, 52]).unwrap()
    }

    /// Description of an executed pass; rotations come from the run's log so
    /// every key switch is counted.
    pub fn from_run(plan: &EncodedDftPlan, run: &HdftRun) -> Result<Self> {
        let uses = padded(run.log.uses_per_iteration(), plan.iterations.len())?;
        let iterations = plan
            .iterations
            .iter()
            .zip(uses)
            .map(|(it, hrots)| IterationDesc {
                level: it.level,
                hrots,
                pmults: it.pmults(),
            })
            .collect();
        Ok(PassDescription {
            label: plan.direction.name().to_string(),
            iterations,
        })
    }

    pub fn hrots(&self) -> usize {
        self.iterations.iter().map(|i| i.hrots).sum()
    }

    pub fn pmults(&self) -> usize {
        self.iterations.iter().map(|i| i.pmults).sum()
    }

    /// Every iteration rescales once, so levels must step down by one and
    /// stay within 1..=L.
    pub fn validate(&self, p: &ParamProfile) -> Result<()> {
        if self.iterations.is_empty() {
            return Err(Error::Schedule("pass has no iterations".into()));
        }
        for (i, it) in self.iterations.iter().enumerate() {
            if it.level == 0 || it.level > p.max_level {
                return Err(Error::Schedule(format!(
                    "iteration {i} at level {} outside 1..={}",
                    it.level, p.max_level
                )));
            }
            if i > 0 && it.level + 1 != self.iterations[i - 1].level {
                return Err(Error::Schedule(format!(
                    "iteration {i} at level {} does not follow level {}",
                    it.level,
                    self.iterations[i - 1].level
                )));
            }
        }
        Ok(())
    }
}

/// Per-iteration counts from a log, with trailing iterations that used no
/// keys filled in as zero.
fn padded(mut counts: Vec<usize>, iterations: usize) -> Result<Vec<usize>> {
    if counts.len() > iterations {
        return Err(Error::Schedule(format!(
            "usage log covers {} iterations, the pass has {iterations}",
            counts.len()
        )));
    }
    counts.resize(iterations, 0);
    Ok(counts)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OffchipBytes {
    pub evk: u64,
    pub plaintext: u64,
    /// Ciphertexts stay on-chip between operations and twisting factors are
    /// generated on the fly; both fields are kept so the split is explicit.
    pub ciphertext: u64,
    pub twist: u64,
}

impl OffchipBytes {
    pub fn total(&self) -> u64 {
        self.evk + self.plaintext + self.ciphertext + self.twist
    }

    fn add(&mut self, o: &OffchipBytes) {
        self.evk += o.evk;
        self.plaintext += o.plaintext;
        self.ciphertext += o.ciphertext;
        self.twist += o.twist;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationCost {
    pub level: usize,
    pub hrots: usize,
    pub pmults: usize,
    pub evk_loads: usize,
    pub offchip: OffchipBytes,
    pub modular_mults: u64,
    /// part of `modular_mults` spent regenerating plaintext limbs
    pub of_limb_mults: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub label: String,
    pub profile: String,
    pub variant: Variant,
    pub offchip: OffchipBytes,
    pub modular_mults: u64,
    pub evk_loads: usize,
    pub ops_per_byte: f64,
    pub iterations: Vec<IterationCost>,
}

impl CostReport {
    pub fn offchip_bytes(&self) -> u64 {
        self.offchip.total()
    }

    pub fn plaintext_share(&self) -> f64 {
        self.offchip.plaintext as f64 / self.offchip_bytes() as f64
    }

    pub fn of_limb_mults(&self) -> u64 {
        self.iterations.iter().map(|i| i.of_limb_mults).sum()
    }

    pub fn evk_loads_per_iteration(&self) -> Vec<usize> {
        self.iterations.iter().map(|i| i.evk_loads).collect()
    }
}

/// Count traffic and multiplications for one pass. Each distinct key loaded
/// in an iteration costs one key at that iteration's level; plaintexts cost
/// all their limbs, or only the q_0 limb when limbs are regenerated on chip.
/// When `usage` is given its load counts replace the variant's defaults
/// (one key per rotation for the baseline, two per iteration for Min-KS).
pub fn hdft_pass_cost(
    desc: &PassDescription,
    p: &ParamProfile,
    variant: Variant,
    usage: Option<&EvkUsageLog>,
) -> Result<CostReport> {
    desc.validate(p)?;
    let logged = match usage {
        Some(log) => {
            let n = desc.iterations.len();
            let uses = padded(log.uses_per_iteration(), n)?;
            let expected: Vec<usize> = desc.iterations.iter().map(|i| i.hrots).collect();
            if uses != expected {
                return Err(Error::Schedule(format!(
                    "usage log has {uses:?} key switches per iteration, the pass has {expected:?}"
                )));
            }
            Some(padded(log.loads_per_iteration(), n)?)
        }
        None => None,
    };
    let mut iterations = Vec::with_capacity(desc.iterations.len());
    let mut offchip = OffchipBytes::default();
    let mut mults = 0u64;
    let mut loads = 0usize;
    for (i, it) in desc.iterations.iter().enumerate() {
        let evk_loads = match &logged {
            Some(l) => l[i],
            None if variant.minks() => it.hrots.min(2),
            None => it.hrots,
        };
        let pt_bytes = if variant.of_limb() {
            p.poly_bytes(1)
        } else {
            p.plaintext_bytes_at(it.level)
        };
        let bytes = OffchipBytes {
            evk: evk_loads as u64 * p.evk_bytes_at(it.level),
            plaintext: it.pmults as u64 * pt_bytes,
            ciphertext: 0,
            twist: 0,
        };
        let extra = if variant.of_limb() {
            it.pmults as u64 * of_limb_mults(p, it.level)
        } else {
            0
        };
        let m = it.hrots as u64 * keyswitch_mults(p, it.level).total()
            + it.pmults as u64 * pmult_mults(p, it.level)
            + rescale_mults(p, it.level)
            + extra;
        offchip.add(&bytes);
        mults += m;
        loads += evk_loads;
        iterations.push(IterationCost {
            level: it.level,
            hrots: it.hrots,
            pmults: it.pmults,
            evk_loads,
            offchip: bytes,
            modular_mults: m,
            of_limb_mults: extra,
        });
    }
    let total = offchip.total();
    Ok(CostReport {
        label: desc.label.clone(),
        profile: p.name.clone(),
        variant,
        offchip,
        modular_mults: mults,
        evk_loads: loads,
        ops_per_byte: if total > 0 {
            mults as f64 / total as f64
        } else {
            f64::INFINITY
        },
        iterations,
    })
}

/// The three variants side by side for one pass.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantComparison {
    pub baseline: CostReport,
    pub minks: CostReport,
    pub oflimb: CostReport,
}

impl VariantComparison {
    pub fn analytic(desc: &PassDescription, p: &ParamProfile) -> Result<Self> {
        Ok(VariantComparison {
            baseline: hdft_pass_cost(desc, p, Variant::Baseline, None)?,
            minks: hdft_pass_cost(desc, p, Variant::MinKs, None)?,
            oflimb: hdft_pass_cost(desc, p, Variant::MinKsOfLimb, None)?,
        })
    }

    pub fn get(&self, v: Variant) -> &CostReport {
        match v {
            Variant::Baseline => &self.baseline,
            Variant::MinKs => &self.minks,
            Variant::MinKsOfLimb => &self.oflimb,
        }
    }

    /// Intensity under Min-KS relative to the baseline.
    pub fn minks_gain(&self) -> f64 {
        self.minks.ops_per_byte / self.baseline.ops_per_byte
    }

    pub fn final_intensity(&self) -> f64 {
        self.oflimb.ops_per_byte
    }

    /// Fraction of baseline traffic removed by both techniques together.
    pub fn traffic_reduction(&self) -> f64 {
        1.0 - self.oflimb.offchip_bytes() as f64 / self.baseline.offchip_bytes() as f64
    }

    /// Share of the final variant's work spent regenerating plaintext limbs.
    pub fn of_limb_overhead(&self) -> f64 {
        self.oflimb.of_limb_mults() as f64 / self.oflimb.modular_mults as f64
    }
}

/// Fraction of a machine's multipliers kept busy if the pass can go no faster
/// than streaming its single-use data: min(1, work / (multipliers · clock ·
/// bytes / bandwidth)).
pub fn utilization_bound(m: &MachineProfile, single_use_bytes: f64, workload_mults: f64) -> f64 {
    let load_time = single_use_bytes / m.offchip_bandwidth;
    let capacity = m.modular_multipliers as f64 * m.clock_hz * load_time;
    if capacity <= 0.0 {
        return 1.0;
    }
    (workload_mults / capacity).min(1.0)
}

/// Amortized multiplication time per slot: one bootstrap plus a
/// multiplication at each usable level, spread over the usable levels and
/// the slots.
pub fn tas_metric(t_boot: f64, t_mult: impl Fn(usize) -> f64, p: &ParamProfile) -> Result<f64> {
    let boot = p
        .boot_levels
        .ok_or_else(|| Error::Config(format!("profile {} does not bootstrap", p.name)))?;
    if p.max_level <= boot {
        return Err(Error::Config(format!(
            "L = {} leaves no usable level after bootstrapping ({boot})",
            p.max_level
        )));
    }
    if p.slots == 0 {
        return Err(Error::Config("profile has no slots".into()));
    }
    let usable = p.max_level - boot;
    let total = t_boot + (1..=usable).map(t_mult).sum::<f64>();
    Ok(total / usable as f64 / p.slots as f64)
}
