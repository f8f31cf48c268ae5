//! Homomorphic evaluation of a [`DftPlan`] with baby-step/giant-step
//! regrouping.
//!
//! Each iteration computes Σ_i D_i ⊙ rot(t, i·b) for diagonal indices
//! |i| < 2^k and stride b, then rescales once. Offsets are shifted to
//! u ≥ 0 and split as u = j·2^k1 + i'' so that
//!
//!   Σ_j rot( Σ_i'' rot(D, −j·g) ⊙ rot(t, i''·b), j·g ),   g = 2^k1·b.
//!
//! The baseline shifts by pre-rotating t by −2^k·b and rotates every baby
//! and giant step with its own key.
//!
//! Min-KS keeps the ciphertext rotated by a running offset ρ instead of
//! pre-rotating: an iteration reads rot(t, ρ) and writes rot(t', ρ + δ), which
//! turns diagonal i into offset u = i + δ/b and its constant into
//! rot(D_i, ρ + δ − j·g). Choosing δ = 2^k for the stride-1 iteration and
//! (2^k − 1)·b for the others makes the offsets sum to n ≡ 0, so the final
//! output is unrotated. Baby steps are a chain of rotations by b and giant
//! steps a Horner fold of rotations by g, so one iteration touches exactly
//! two keys. The chain is sequential by construction; the baseline's independent
//! rotations run in parallel.

use rayon::prelude::*;

use crate::ckks::keys::{EvaluationKey, RotationKeys};
use crate::ckks::{encode, hadd, hadd_assign, hrescale, hrot, pmult, Ciphertext, CkksContext, Plaintext};
use crate::error::{Error, Result};
use crate::hdft::log::EvkUsageLog;
use crate::hdft::plan::{rotate_slots, DftDirection, DftPlan, PlanShape};
use crate::hdft::seed::{of_limb_extend, read_seed_body, write_seed_body, PlaintextSeed};
use crate::serial::{Header, ObjectKind, Reader, Writer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Baseline,
    MinKs,
    /// Min-KS with plaintext constants kept as q_0 seeds
    MinKsOfLimb,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Baseline, Variant::MinKs, Variant::MinKsOfLimb];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::MinKs => "minks",
            Variant::MinKsOfLimb => "minks-oflimb",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant '{s}' (baseline, minks, minks-oflimb)")))
    }

    pub fn minks(self) -> bool {
        self != Variant::Baseline
    }

    pub fn of_limb(self) -> bool {
        self == Variant::MinKsOfLimb
    }

    fn tag(self) -> u8 {
        match self {
            Variant::Baseline => 0,
            Variant::MinKs => 1,
            Variant::MinKsOfLimb => 2,
        }
    }

    fn from_tag(t: u8) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.tag() == t)
            .ok_or_else(|| Error::Serialization(format!("bad variant tag {t}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanConstant {
    Full(Plaintext),
    Seed(PlaintextSeed),
}

impl PlanConstant {
    /// The plaintext at `level`, extending a seed on the fly.
    pub fn plaintext(&self, ctx: &CkksContext, level: usize) -> Result<std::borrow::Cow<'_, Plaintext>> {
        match self {
            PlanConstant::Full(p) if p.level == level => Ok(std::borrow::Cow::Borrowed(p)),
            PlanConstant::Full(p) => Err(Error::LevelMismatch(p.level, level)),
            PlanConstant::Seed(s) => Ok(std::borrow::Cow::Owned(of_limb_extend(ctx, s, level)?)),
        }
    }

    /// Bytes fetched to use this constant once.
    pub fn byte_size(&self) -> usize {
        match self {
            PlanConstant::Full(p) => 8 * p.poly.degree() * p.poly.num_limbs(),
            PlanConstant::Seed(s) => s.byte_size(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedTerm {
    pub baby: usize,
    pub constant: PlanConstant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedGiant {
    pub giant: usize,
    pub terms: Vec<EncodedTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedIteration {
    /// level the iteration runs at; the output is at level − 1
    pub level: usize,
    pub stride: usize,
    pub baby_step: i64,
    pub giant_step: i64,
    /// baseline only
    pub pre_rotation: Option<i64>,
    /// Min-KS offset change δ
    pub offset_shift: i64,
    /// only the main diagonal: a single plaintext multiplication
    pub degenerate: bool,
    pub giants: Vec<EncodedGiant>,
}

impl EncodedIteration {
    pub fn max_baby(&self) -> usize {
        self.giants
            .iter()
            .flat_map(|g| g.terms.iter().map(|t| t.baby))
            .max()
            .unwrap_or(0)
    }

    pub fn max_giant(&self) -> usize {
        self.giants.iter().map(|g| g.giant).max().unwrap_or(0)
    }

    pub fn pmults(&self) -> usize {
        self.giants.iter().map(|g| g.terms.len()).sum()
    }

    /// Distinct baby indices ≥ 1 that need a rotation (baseline).
    fn babies(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self
            .giants
            .iter()
            .flat_map(|g| g.terms.iter().map(|t| t.baby))
            .filter(|&b| b > 0)
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }
}

/// A plan with its constants encoded for one variant and start level.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedDftPlan {
    pub variant: Variant,
    pub shape: PlanShape,
    pub direction: DftDirection,
    pub start_level: usize,
    pub iterations: Vec<EncodedIteration>,
}

impl EncodedDftPlan {
    pub fn end_level(&self) -> usize {
        self.start_level - self.iterations.len()
    }

    /// Every rotation amount the evaluation asks a key for.
    pub fn required_rotations(&self) -> Vec<i64> {
        let mut r = Vec::new();
        for it in &self.iterations {
            if it.degenerate {
                continue;
            }
            if self.variant.minks() {
                if it.max_baby() > 0 {
                    r.push(it.baby_step);
                }
                if it.max_giant() > 0 {
                    r.push(it.giant_step);
                }
            } else {
                r.extend(it.pre_rotation);
                r.extend(it.babies().into_iter().map(|b| b as i64 * it.baby_step));
                r.extend(
                    it.giants
                        .iter()
                        .filter(|g| g.giant > 0)
                        .map(|g| g.giant as i64 * it.giant_step),
                );
            }
        }
        r.sort_unstable();
        r.dedup();
        r
    }

    /// Bytes of plaintext constants fetched per iteration.
    pub fn constant_bytes(&self) -> Vec<usize> {
        self.iterations
            .iter()
            .map(|it| {
                it.giants
                    .iter()
                    .flat_map(|g| g.terms.iter())
                    .map(|t| t.constant.byte_size())
                    .sum()
            })
            .collect()
    }

    pub fn to_bytes(&self, ctx: &CkksContext) -> Vec<u8> {
        let mut w = Writer::new(&Header {
            kind: ObjectKind::DftPlan,
            degree: ctx.degree(),
            level: self.start_level,
            primes: ctx.level_basis(self.start_level).primes(),
        });
        w.u8(self.variant.tag());
        w.u8(match self.direction {
            DftDirection::Dft => 0,
            DftDirection::Idft => 1,
        });
        w.u32(self.shape.slots as u32);
        w.u8(self.shape.k as u8);
        w.u8(self.shape.k1 as u8);
        w.u8(self.shape.k2 as u8);
        w.u32(self.iterations.len() as u32);
        for it in &self.iterations {
            w.u32(it.level as u32);
            w.u64(it.stride as u64);
            w.u64(it.baby_step as u64);
            w.u64(it.giant_step as u64);
            w.u8(it.pre_rotation.is_some() as u8);
            w.u64(it.pre_rotation.unwrap_or(0) as u64);
            w.u64(it.offset_shift as u64);
            w.u8(it.degenerate as u8);
            w.u32(it.giants.len() as u32);
            for g in &it.giants {
                w.u32(g.giant as u32);
                w.u32(g.terms.len() as u32);
                for t in &g.terms {
                    w.u32(t.baby as u32);
                    let seed = match &t.constant {
                        PlanConstant::Seed(s) => s.clone(),
                        PlanConstant::Full(p) => {
                            PlaintextSeed::from_plaintext(ctx, p, 0).expect("plan constants are encoded below q0/2")
                        }
                    };
                    write_seed_body(&mut w, &seed);
                }
            }
        }
        w.finish()
    }

    /// Full-limb variants are rebuilt from the stored seeds, which is exact.
    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::DftPlan)?;
        if h.degree != ctx.degree() || h.level > ctx.max_level() || h.primes != ctx.level_basis(h.level).primes() {
            return Err(Error::Serialization("plan does not match the parameter set".into()));
        }
        let variant = Variant::from_tag(r.u8()?)?;
        let direction = match r.u8()? {
            0 => DftDirection::Dft,
            1 => DftDirection::Idft,
            t => return Err(Error::Serialization(format!("bad direction tag {t}"))),
        };
        let slots = r.u32()? as usize;
        let (k, k1, k2) = (r.u8()? as u32, r.u8()? as u32, r.u8()? as u32);
        let shape = PlanShape::new(slots, k, k1, k2).map_err(|e| Error::Serialization(e.to_string()))?;
        let count = r.u32()? as usize;
        if count > h.level {
            return Err(Error::Serialization("more iterations than levels".into()));
        }
        let mut iterations = Vec::with_capacity(count);
        for _ in 0..count {
            let level = r.u32()? as usize;
            if level == 0 || level > h.level {
                return Err(Error::Serialization(format!("iteration level {level} out of range")));
            }
            let stride = r.u64()? as usize;
            let baby_step = r.u64()? as i64;
            let giant_step = r.u64()? as i64;
            let has_pre = r.u8()? != 0;
            let pre = r.u64()? as i64;
            let offset_shift = r.u64()? as i64;
            let degenerate = r.u8()? != 0;
            let ng = r.u32()? as usize;
            let mut giants = Vec::new();
            for _ in 0..ng {
                let giant = r.u32()? as usize;
                let nt = r.u32()? as usize;
                let mut terms = Vec::new();
                for _ in 0..nt {
                    let baby = r.u32()? as usize;
                    let seed = read_seed_body(&mut r, ctx)?;
                    let constant = if variant.of_limb() {
                        PlanConstant::Seed(seed)
                    } else {
                        PlanConstant::Full(of_limb_extend(ctx, &seed, level)?)
                    };
                    terms.push(EncodedTerm { baby, constant });
                }
                giants.push(EncodedGiant { giant, terms });
            }
            iterations.push(EncodedIteration {
                level,
                stride,
                baby_step,
                giant_step,
                pre_rotation: has_pre.then_some(pre),
                offset_shift,
                degenerate,
                giants,
            });
        }
        r.finish()?;
        Ok(EncodedDftPlan {
            variant,
            shape,
            direction,
            start_level: h.level,
            iterations,
        })
    }
}

/// Regroup and encode every iteration's constants. Iteration s runs at level
/// `start_level − s` with constants at scale q_level, so rescaling restores
/// the input scale exactly.
pub fn encode_plan(ctx: &CkksContext, plan: &DftPlan, variant: Variant, start_level: usize) -> Result<EncodedDftPlan> {
    let n = plan.slots();
    if n != ctx.slots() {
        return Err(Error::InvalidPlan(format!(
            "plan has {n} slots, parameters {}",
            ctx.slots()
        )));
    }
    let iters = plan.iterations.len();
    if start_level > ctx.max_level() || start_level < iters {
        return Err(Error::InsufficientLevel {
            need: iters,
            have: start_level.min(ctx.max_level()),
        });
    }
    let PlanShape { k, k1, k2, .. } = plan.shape;
    if variant.minks() && (k1 == 0 || k2 == 0) && plan.iterations.iter().any(|it| !it.is_degenerate()) {
        return Err(Error::InvalidPlan("Min-KS needs both k1 ≥ 1 and k2 ≥ 1".into()));
    }
    let radix = 1i64 << k;
    let span = 1i64 << (k1 + k2);
    let mut rho = 0i64;
    let mut out = Vec::with_capacity(iters);
    for (s, it) in plan.iterations.iter().enumerate() {
        let level = start_level - s;
        let b = it.stride as i64;
        let g = b << k1;
        let degenerate = it.is_degenerate();
        let (shift, pre_rotation) = if degenerate {
            (0, None)
        } else if variant.minks() {
            (if b == 1 { radix } else { (radix - 1) * b }, None)
        } else {
            (radix * b, Some(-radix * b))
        };
        let index_shift = shift / b;
        let next_rho = if variant.minks() { rho + shift } else { 0 };
        let scale = ctx.q(level) as f64;

        let mut groups: std::collections::BTreeMap<usize, Vec<(usize, Vec<num_complex::Complex64>)>> =
            Default::default();
        for (&i, diag) in &it.diagonals {
            let u = i + index_shift;
            if !(0..span).contains(&u) {
                return Err(Error::InvalidPlan(format!(
                    "diagonal {i} falls outside the baby/giant grid"
                )));
            }
            let (j, baby) = ((u >> k1) as usize, (u & ((1 << k1) - 1)) as usize);
            let values = rotate_slots(diag, next_rho - j as i64 * g);
            groups.entry(j).or_default().push((baby, values));
        }
        let giants = groups
            .into_iter()
            .map(|(giant, terms)| {
                let terms = terms
                    .into_par_iter()
                    .map(|(baby, values)| {
                        let pt = encode(ctx, &values, scale, level)?;
                        let constant = if variant.of_limb() {
                            PlanConstant::Seed(PlaintextSeed::from_plaintext(ctx, &pt, constant_tag(s, giant, baby))?)
                        } else {
                            PlanConstant::Full(pt)
                        };
                        Ok(EncodedTerm { baby, constant })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(EncodedGiant { giant, terms })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(EncodedIteration {
            level,
            stride: it.stride,
            baby_step: b,
            giant_step: g,
            pre_rotation,
            offset_shift: shift,
            degenerate,
            giants,
        });
        rho = next_rho.rem_euclid(n as i64);
    }
    if rho != 0 {
        return Err(Error::InvalidPlan(format!(
            "rotation offsets leave a residual rotation of {rho}"
        )));
    }
    Ok(EncodedDftPlan {
        variant,
        shape: plan.shape,
        direction: plan.direction,
        start_level,
        iterations: out,
    })
}

/// iteration, giant and baby index packed into one identifier
fn constant_tag(s: usize, giant: usize, baby: usize) -> u64 {
    ((s as u64) << 32) | ((giant as u64) << 16) | baby as u64
}

/// Output of one transform together with what it did.
#[derive(Clone, Debug)]
pub struct HdftRun {
    pub ciphertext: Ciphertext,
    pub log: EvkUsageLog,
    pub hrots: usize,
    pub pmults: usize,
}

fn rotate(
    ctx: &CkksContext,
    ct: &Ciphertext,
    r: i64,
    evk: &EvaluationKey,
    log: &mut EvkUsageLog,
) -> Result<Ciphertext> {
    log.record(r, evk.id());
    hrot(ctx, ct, r, evk)
}

/// rot(x, r), rot(x, 2r), …, rot(x, m·r), each computed from the previous
/// one with the same key.
pub fn minks_rotations(
    ctx: &CkksContext,
    ct: &Ciphertext,
    r: i64,
    m: usize,
    evk: &EvaluationKey,
    log: &mut EvkUsageLog,
) -> Result<Vec<Ciphertext>> {
    let mut out: Vec<Ciphertext> = Vec::with_capacity(m);
    for i in 0..m {
        let next = rotate(ctx, out.last().unwrap_or(ct), r, evk, log)?;
        debug_assert_eq!(out.len(), i);
        out.push(next);
    }
    Ok(out)
}

/// Σ_i rot(x_i, i·r) as the fold acc ← rot(acc, r) + x_(m−1−j), one key.
pub fn minks_rotate_accumulate(
    ctx: &CkksContext,
    cts: &[Ciphertext],
    r: i64,
    evk: &EvaluationKey,
    log: &mut EvkUsageLog,
) -> Result<Ciphertext> {
    let parts: Vec<Option<&Ciphertext>> = cts.iter().map(Some).collect();
    accumulate_sparse(ctx, &parts, r, evk, log)?.ok_or_else(|| Error::Config("nothing to accumulate".into()))
}

/// Horner fold where absent entries contribute nothing.
fn accumulate_sparse(
    ctx: &CkksContext,
    parts: &[Option<&Ciphertext>],
    r: i64,
    evk: &EvaluationKey,
    log: &mut EvkUsageLog,
) -> Result<Option<Ciphertext>> {
    let mut acc: Option<Ciphertext> = None;
    for part in parts.iter().rev() {
        if let Some(a) = acc.take() {
            acc = Some(rotate(ctx, &a, r, evk, log)?);
        }
        acc = match (acc, part) {
            (Some(mut a), Some(x)) => {
                if a.level != x.level {
                    return Err(Error::LevelMismatch(a.level, x.level));
                }
                hadd_assign(&mut a, x)?;
                Some(a)
            }
            (None, Some(x)) => Some((*x).clone()),
            (a, None) => a,
        };
    }
    Ok(acc)
}

fn check_input(ctx: &CkksContext, ct: &Ciphertext, plan: &EncodedDftPlan) -> Result<Ciphertext> {
    if ct.level < plan.start_level {
        return Err(Error::InsufficientLevel {
            need: plan.start_level,
            have: ct.level,
        });
    }
    if ct.level == plan.start_level {
        return Ok(ct.clone());
    }
    let keep = plan.start_level + 1;
    let basis = ctx.level_basis(plan.start_level);
    let b = ct.b.restrict(&basis)?;
    let a = ct.a.restrict(&basis)?;
    debug_assert_eq!(b.num_limbs(), keep);
    Ciphertext::new(b, a, ct.scale)
}

/// Σ_t pmult(baby[t], constant) for one giant group.
fn inner_sum(ctx: &CkksContext, level: usize, babies: &[Ciphertext], group: &EncodedGiant) -> Result<Ciphertext> {
    let prods = group
        .terms
        .par_iter()
        .map(|t| {
            let pt = t.constant.plaintext(ctx, level)?;
            pmult(&babies[t.baby], &pt)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = prods.into_iter();
    let mut acc = it
        .next()
        .ok_or_else(|| Error::InvalidPlan("empty giant group".into()))?;
    for p in it {
        hadd_assign(&mut acc, &p)?;
    }
    Ok(acc)
}

fn degenerate_iteration(
    ctx: &CkksContext,
    ct: &Ciphertext,
    it: &EncodedIteration,
    run: &mut HdftRun,
) -> Result<Ciphertext> {
    let sum = inner_sum(ctx, it.level, std::slice::from_ref(ct), &it.giants[0])?;
    run.pmults += it.pmults();
    hrescale(ctx, &sum)
}

/// Baseline evaluation: pre-rotation plus a separate key for every baby and
/// giant step.
pub fn hdft_baseline(
    ctx: &CkksContext,
    ct: &Ciphertext,
    plan: &EncodedDftPlan,
    keys: &RotationKeys,
) -> Result<HdftRun> {
    if plan.variant != Variant::Baseline {
        return Err(Error::InvalidPlan(format!(
            "{} plan given to the baseline evaluator",
            plan.variant.name()
        )));
    }
    let mut t = check_input(ctx, ct, plan)?;
    let mut run = HdftRun {
        ciphertext: t.clone(),
        log: EvkUsageLog::new(),
        hrots: 0,
        pmults: 0,
    };
    let n = ctx.degree();
    for it in &plan.iterations {
        run.log.begin_iteration();
        if it.degenerate {
            t = degenerate_iteration(ctx, &t, it, &mut run)?;
            continue;
        }
        let base = match it.pre_rotation {
            Some(r) => {
                run.hrots += 1;
                rotate(ctx, &t, r, keys.get(r, n)?, &mut run.log)?
            }
            None => t.clone(),
        };
        let wanted = it.babies();
        for &b in &wanted {
            let r = b as i64 * it.baby_step;
            run.log.record(r, keys.get(r, n)?.id());
        }
        let rotated = wanted
            .par_iter()
            .map(|&b| {
                let r = b as i64 * it.baby_step;
                hrot(ctx, &base, r, keys.get(r, n)?)
            })
            .collect::<Result<Vec<_>>>()?;
        run.hrots += rotated.len();
        let mut babies = vec![base.clone(); it.max_baby() + 1];
        for (&b, c) in wanted.iter().zip(rotated) {
            babies[b] = c;
        }
        for g in it.giants.iter().filter(|g| g.giant > 0) {
            let r = g.giant as i64 * it.giant_step;
            run.log.record(r, keys.get(r, n)?.id());
        }
        let parts = it
            .giants
            .par_iter()
            .map(|g| {
                let x = inner_sum(ctx, it.level, &babies, g)?;
                if g.giant == 0 {
                    return Ok(x);
                }
                let r = g.giant as i64 * it.giant_step;
                hrot(ctx, &x, r, keys.get(r, n)?)
            })
            .collect::<Result<Vec<_>>>()?;
        run.hrots += it.giants.iter().filter(|g| g.giant > 0).count();
        run.pmults += it.pmults();
        let mut parts = parts.into_iter();
        let mut acc = parts.next().expect("a non-degenerate iteration has terms");
        for p in parts {
            acc = hadd(&acc, &p)?;
        }
        t = hrescale(ctx, &acc)?;
    }
    run.ciphertext = t;
    Ok(run)
}

/// Min-KS evaluation: two keys per iteration, no pre-rotation.
pub fn hdft_minks(ctx: &CkksContext, ct: &Ciphertext, plan: &EncodedDftPlan, keys: &RotationKeys) -> Result<HdftRun> {
    if !plan.variant.minks() {
        return Err(Error::InvalidPlan("baseline plan given to the Min-KS evaluator".into()));
    }
    let mut t = check_input(ctx, ct, plan)?;
    let mut run = HdftRun {
        ciphertext: t.clone(),
        log: EvkUsageLog::new(),
        hrots: 0,
        pmults: 0,
    };
    let n = ctx.degree();
    for it in &plan.iterations {
        run.log.begin_iteration();
        if it.degenerate {
            t = degenerate_iteration(ctx, &t, it, &mut run)?;
            continue;
        }
        let mut babies = vec![t.clone()];
        if it.max_baby() > 0 {
            let evk = keys.get(it.baby_step, n)?;
            babies.extend(minks_rotations(
                ctx,
                &t,
                it.baby_step,
                it.max_baby(),
                evk,
                &mut run.log,
            )?);
            run.hrots += it.max_baby();
        }
        let sums = it
            .giants
            .par_iter()
            .map(|g| inner_sum(ctx, it.level, &babies, g))
            .collect::<Result<Vec<_>>>()?;
        run.pmults += it.pmults();
        let mut parts: Vec<Option<&Ciphertext>> = vec![None; it.max_giant() + 1];
        for (g, s) in it.giants.iter().zip(&sums) {
            parts[g.giant] = Some(s);
        }
        let acc = if it.max_giant() > 0 {
            let evk = keys.get(it.giant_step, n)?;
            let before = run.log.len();
            let acc = accumulate_sparse(ctx, &parts, it.giant_step, evk, &mut run.log)?;
            run.hrots += run.log.len() - before;
            acc
        } else {
            parts[0].cloned()
        };
        let acc = acc.ok_or_else(|| Error::InvalidPlan("iteration without terms".into()))?;
        t = hrescale(ctx, &acc)?;
    }
    run.ciphertext = t;
    Ok(run)
}

/// Dispatch on the plan's variant.
pub fn hdft(ctx: &CkksContext, ct: &Ciphertext, plan: &EncodedDftPlan, keys: &RotationKeys) -> Result<HdftRun> {
    if plan.variant.minks() {
        hdft_minks(ctx, ct, plan, keys)
    } else {
        hdft_baseline(ctx, ct, plan, keys)
    }
}
