//! Ready-made reports over the preset profiles, with pass/fail against the
//! reference figures where a profile has them.

use super::keyswitch::keyswitch_mults;
use super::pass::{tas_metric, utilization_bound, PassDescription, VariantComparison};
use super::profile::{
    data_sizes, distribution_transfer, reference_rows, MachineProfile, ParamProfile, TransferPolicy, MIB,
};
use super::report::{fmt, Report, Table};
use crate::error::Result;
use crate::hdft::DftDirection;

/// Reference intensity figures for the ARK transforms: Min-KS gain, final
/// ops/byte, traffic reduction, utilization of the scaled F1 machine and the
/// single-use bytes that utilization is computed from.
pub struct IntensityTargets {
    pub gain: f64,
    pub final_ops_per_byte: f64,
    pub reduction: f64,
    pub utilization: f64,
    pub single_use_bytes: f64,
}

pub fn ark_targets(direction: DftDirection) -> IntensityTargets {
    match direction {
        DftDirection::Idft => IntensityTargets {
            gain: 2.6,
            final_ops_per_byte: 11.1,
            reduction: 0.88,
            utilization: 0.0861,
            single_use_bytes: 6.4e9,
        },
        DftDirection::Dft => IntensityTargets {
            gain: 2.0,
            final_ops_per_byte: 9.6,
            reduction: 0.78,
            utilization: 0.1332,
            single_use_bytes: 0.6e9,
        },
    }
}

fn within(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

/// Data sizes of the four reference rows, byte-exact against their MiB figures.
pub fn sizes_report() -> Report {
    let mut r = Report::new();
    let mut t = Table::new(
        "data sizes (MiB)",
        &[
            "profile",
            "N",
            "L",
            "dnum",
            "alpha",
            "word",
            "plaintext",
            "ciphertext",
            "evk",
        ],
    );
    for (p, want) in reference_rows() {
        let got = data_sizes(&p);
        t.row(row_for(&p, &got.as_array()));
        for ((what, g), w) in ["plaintext", "ciphertext", "evk"].iter().zip(got.as_array()).zip(want) {
            let expect = (w * MIB as f64) as u64;
            r.bytes(&format!("{}.size.{what}", p.name), "-", g);
            r.check(
                &format!("sizes.{}.{what}", p.name),
                g == expect,
                format!("{} MiB (expected {} MiB)", fmt(g as f64 / MIB as f64), fmt(w)),
            );
        }
    }
    r.tables.push(t);
    r
}

/// Sizes of one profile, no expectations.
pub fn profile_sizes(p: &ParamProfile) -> Report {
    let mut r = Report::new();
    let mut t = Table::new(
        "data sizes (MiB)",
        &[
            "profile",
            "N",
            "L",
            "dnum",
            "alpha",
            "word",
            "plaintext",
            "ciphertext",
            "evk",
        ],
    );
    let s = data_sizes(p);
    t.row(row_for(p, &s.as_array()));
    for (what, g) in ["plaintext", "ciphertext", "evk"].iter().zip(s.as_array()) {
        r.bytes(&format!("{}.size.{what}", p.name), "-", g);
    }
    r.tables.push(t);
    r
}

fn row_for(p: &ParamProfile, sizes: &[u64; 3]) -> Vec<String> {
    let mut row = vec![
        p.name.clone(),
        format!("2^{}", p.log_degree()),
        p.max_level.to_string(),
        p.dnum.to_string(),
        p.alpha.to_string(),
        format!("{}B", p.word_bytes),
    ];
    row.extend(sizes.iter().map(|&b| fmt(b as f64 / MIB as f64)));
    row
}

/// Default level schedule: the inverse transform at the top three levels,
/// the forward transform at levels 3, 2, 1. Rotation and product counts are
/// those of a radix-32 transform over 2^15 slots.
pub fn default_pass(p: &ParamProfile, direction: DftDirection) -> Result<PassDescription> {
    let top = p.max_level;
    let levels: Vec<usize> = match direction {
        DftDirection::Idft => vec![top, top - 1, top - 2],
        DftDirection::Dft => vec![3, 2, 1],
    };
    let pass = PassDescription::new(direction.name(), &levels, &[14, 13, 13], &[53, 53, 52])?;
    pass.validate(p)?;
    Ok(pass)
}

/// Traffic and intensity of both transforms under all three variants. At the
/// ARK profile the reference figures are checked as well.
pub fn intensity_report(p: &ParamProfile) -> Result<Report> {
    let mut r = Report::new();
    let machine = MachineProfile::scaled_f1();
    let is_ark = *p == ParamProfile::ark();
    for dir in [DftDirection::Idft, DftDirection::Dft] {
        let pass = default_pass(p, dir)?;
        let c = VariantComparison::analytic(&pass, p)?;
        r.comparison(&c);
        let mut t = Table::new(
            &format!("{} on {}: summary", dir.name(), p.name),
            &["metric", "value", "reference"],
        );
        let tg = ark_targets(dir);
        // the reference single-use volume at ARK, the counted baseline traffic elsewhere
        let single_use = if is_ark {
            tg.single_use_bytes
        } else {
            c.baseline.offchip_bytes() as f64
        };
        let util = utilization_bound(&machine, single_use, c.baseline.modular_mults as f64);
        let rows = [
            ("minks_intensity_gain", c.minks_gain(), tg.gain, 0.15),
            ("final_ops_per_byte", c.final_intensity(), tg.final_ops_per_byte, 0.15),
            ("traffic_reduction", c.traffic_reduction(), tg.reduction, 0.15),
            ("scaled_f1_utilization", util, tg.utilization, 0.20),
        ];
        for (name, got, want, tol) in rows {
            let reference = if is_ark {
                format!("{} ±{}%", fmt(want), fmt(tol * 100.0))
            } else {
                "-".into()
            };
            t.row(vec![name.to_string(), fmt(got), reference]);
            if is_ark {
                r.check(
                    &format!("intensity.{}.{name}", dir.name()),
                    within(got, want, tol),
                    format!("{} (expected {} ±{}%)", fmt(got), fmt(want), fmt(tol * 100.0)),
                );
            }
        }
        r.record(
            &format!("{}.{}.scaled_f1_utilization", p.name, dir.name()),
            "baseline",
            fmt(util),
            "fraction",
        );
        r.tables.push(t);
    }
    Ok(r)
}

/// Key-switch work breakdown at max dnum and at the profile's own dnum, and
/// data-distribution transfer volumes.
pub fn breakdown_report(p: &ParamProfile) -> Result<Report> {
    let mut r = Report::new();
    let mut t = Table::new(
        &format!("key-switch work at level {} on {}", p.max_level, p.name),
        &[
            "dnum",
            "alpha",
            "NTT %",
            "BConv %",
            "elementwise %",
            "transfer alt",
            "transfer limb",
        ],
    );
    let is_ark = *p == ParamProfile::ark();
    for (label, q) in [("max", p.with_dnum(p.max_level + 1)?), ("own", p.clone())] {
        let m = keyswitch_mults(&q, q.max_level);
        let alt = distribution_transfer(&q, TransferPolicy::Alternating);
        let limb = distribution_transfer(&q, TransferPolicy::LimbWiseOnly);
        t.row(vec![
            q.dnum.to_string(),
            q.alpha.to_string(),
            format!("{:.2}", 100.0 * m.ntt_share()),
            format!("{:.2}", 100.0 * m.bconv_share()),
            format!("{:.2}", 100.0 * m.elementwise_share()),
            alt.to_string(),
            limb.to_string(),
        ]);
        let v = format!("dnum={}", q.dnum);
        r.record(
            &format!("{}.keyswitch.ntt_share", p.name),
            &v,
            fmt(100.0 * m.ntt_share()),
            "%",
        );
        r.record(
            &format!("{}.keyswitch.bconv_share", p.name),
            &v,
            fmt(100.0 * m.bconv_share()),
            "%",
        );
        r.record(
            &format!("{}.transfer.alternating", p.name),
            &v,
            alt.to_string(),
            "words",
        );
        r.record(
            &format!("{}.transfer.limb_wise_only", p.name),
            &v,
            limb.to_string(),
            "words",
        );
        if is_ark {
            let targets: &[(&str, f64, f64)] = if label == "max" {
                &[("ntt_share_max_dnum", m.ntt_share(), 0.733)]
            } else {
                &[
                    ("ntt_share", m.ntt_share(), 0.548),
                    ("bconv_share", m.bconv_share(), 0.342),
                ]
            };
            for &(name, got, want) in targets {
                r.check(
                    &format!("breakdown.{name}"),
                    (got - want).abs() <= 0.03,
                    format!("{:.2}% (expected {:.1}% ±3 pp)", 100.0 * got, 100.0 * want),
                );
            }
        }
    }
    r.tables.push(t);
    if is_ark {
        // T_A.S. identity: the reported 14.3 ns back from the total it stands for
        let slots = p.slots as f64;
        let usable = (p.max_level - p.boot_levels.unwrap_or(0)) as f64;
        let t_boot = 14.3e-9 * usable * slots;
        let tas = tas_metric(t_boot, |_| 0.0, p)?;
        r.check(
            "tas.identity",
            (tas - 14.3e-9).abs() < 1e-15,
            format!("{} ns", fmt(tas * 1e9)),
        );
    }
    Ok(r)
}
