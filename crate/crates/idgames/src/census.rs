//! End-to-end censuses: enumerate equivalence classes, compute exact bounds
//! per class representative, and aggregate the statistics tables.

pub mod verify;

use crate::classical::optimal_classical;
use crate::exact::{render_decimal, FractionDoc, Rational};
use crate::ns::{is_decomposable, optimal_ns_with, NsConstraintSystem};
use crate::symmetry::{enumerate_classes, EquivalenceClass};
use crate::{Result, Scenario};
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Exact per-class bounds for one equivalence class.
#[derive(Debug, Clone)]
pub struct ClassBounds {
    pub class: EquivalenceClass,
    pub classical: Rational,
    pub no_signaling: Rational,
    /// For nontrivial 3-player classes: whether the LP vertex witness
    /// factors into a bipartite box times a deterministic player.
    pub decomposable_witness: Option<bool>,
}

/// Aggregated census statistics. All histograms run over the nontrivial
/// classes (those with a strict no-signaling advantage) and use exact
/// rational keys.
#[derive(Debug, Clone)]
pub struct CensusReport {
    pub scenario: Scenario,
    pub total_functions: u64,
    pub class_count: u64,
    pub nontrivial_class_count: u64,
    pub nontrivial_function_count: u64,
    pub histogram_cl: BTreeMap<Rational, u64>,
    pub histogram_ns: BTreeMap<Rational, u64>,
    pub histogram_abs_gap: BTreeMap<Rational, u64>,
    pub histogram_rel_gap: BTreeMap<Rational, u64>,
    /// Number of nontrivial classes whose LP witness decomposes
    /// (3-player scenarios only).
    pub decomposable_count: Option<u64>,
    pub bounds: Vec<ClassBounds>,
}

/// Runs the full census pipeline. Per-class work is farmed out to a local
/// thread pool; the reduce is an ordered fold over the sorted class list, so
/// the report does not depend on the thread count.
pub fn run_census(scenario: &Scenario, threads: usize) -> Result<CensusReport> {
    let classes = enumerate_classes(scenario)?;
    let sys = NsConstraintSystem::build(scenario);
    let is_tripartite = scenario.players() == 3;

    let compute = |class: &EquivalenceClass| -> Result<ClassBounds> {
        let f = &class.representative;
        let classical = optimal_classical(f)?.value;
        let ns = optimal_ns_with(f, &sys)?;
        let decomposable_witness = if is_tripartite && ns.value > classical {
            Some(is_decomposable(&ns.witness)?.is_some())
        } else {
            None
        };
        Ok(ClassBounds {
            class: class.clone(),
            classical,
            no_signaling: ns.value,
            decomposable_witness,
        })
    };

    let bounds: Result<Vec<ClassBounds>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::Error::Parse(format!("thread pool: {e}")))?;
        pool.install(|| classes.par_iter().map(compute).collect())
    } else {
        classes.iter().map(compute).collect()
    };
    let bounds = bounds?;

    let mut report = CensusReport {
        scenario: scenario.clone(),
        total_functions: bounds.iter().map(|b| b.class.orbit_size).sum(),
        class_count: bounds.len() as u64,
        nontrivial_class_count: 0,
        nontrivial_function_count: 0,
        histogram_cl: BTreeMap::new(),
        histogram_ns: BTreeMap::new(),
        histogram_abs_gap: BTreeMap::new(),
        histogram_rel_gap: BTreeMap::new(),
        decomposable_count: if is_tripartite { Some(0) } else { None },
        bounds: Vec::new(),
    };
    for b in &bounds {
        if b.no_signaling > b.classical {
            report.nontrivial_class_count += 1;
            report.nontrivial_function_count += b.class.orbit_size;
            *report.histogram_cl.entry(b.classical.clone()).or_insert(0) += 1;
            *report
                .histogram_ns
                .entry(b.no_signaling.clone())
                .or_insert(0) += 1;
            let abs = &b.no_signaling - &b.classical;
            let rel = &b.no_signaling / &b.classical - Rational::one();
            *report.histogram_abs_gap.entry(abs).or_insert(0) += 1;
            *report.histogram_rel_gap.entry(rel).or_insert(0) += 1;
            if b.decomposable_witness == Some(true) {
                if let Some(count) = report.decomposable_count.as_mut() {
                    *count += 1;
                }
            }
        }
    }
    report.bounds = bounds;
    debug_assert_eq!(
        report.histogram_cl.values().sum::<u64>(),
        report.nontrivial_class_count
    );
    debug_assert_eq!(
        report.histogram_ns.values().sum::<u64>(),
        report.nontrivial_class_count
    );
    debug_assert_eq!(
        report.histogram_abs_gap.values().sum::<u64>(),
        report.nontrivial_class_count
    );
    Ok(report)
}

/// Serializable census summary (per-class bounds omitted).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusDoc {
    pub players: usize,
    pub inputs: Vec<usize>,
    pub outputs: usize,
    pub total_functions: u64,
    pub class_count: u64,
    pub nontrivial_class_count: u64,
    pub nontrivial_function_count: u64,
    pub histogram_cl: Vec<(FractionDoc, u64)>,
    pub histogram_ns: Vec<(FractionDoc, u64)>,
    pub histogram_abs_gap: Vec<(FractionDoc, u64)>,
    pub histogram_rel_gap: Vec<(FractionDoc, u64)>,
    pub decomposable_count: Option<u64>,
}

impl CensusReport {
    pub fn to_doc(&self) -> CensusDoc {
        let conv = |m: &BTreeMap<Rational, u64>| -> Vec<(FractionDoc, u64)> {
            m.iter().map(|(k, &v)| (FractionDoc::of(k), v)).collect()
        };
        CensusDoc {
            players: self.scenario.players(),
            inputs: self.scenario.inputs().to_vec(),
            outputs: self.scenario.outputs(),
            total_functions: self.total_functions,
            class_count: self.class_count,
            nontrivial_class_count: self.nontrivial_class_count,
            nontrivial_function_count: self.nontrivial_function_count,
            histogram_cl: conv(&self.histogram_cl),
            histogram_ns: conv(&self.histogram_ns),
            histogram_abs_gap: conv(&self.histogram_abs_gap),
            histogram_rel_gap: conv(&self.histogram_rel_gap),
            decomposable_count: self.decomposable_count,
        }
    }

    /// The histogram tables as CSV, one `table,value,count` row each, values
    /// rendered as decimals the way the statistics tables print them.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,value,count\n");
        let mut emit = |name: &str, m: &BTreeMap<Rational, u64>| {
            for (k, v) in m {
                out.push_str(&format!("{name},{},{v}\n", render_decimal(k)));
            }
        };
        emit("omega_cl", &self.histogram_cl);
        emit("omega_ns", &self.histogram_ns);
        emit("delta_abs", &self.histogram_abs_gap);
        emit("delta_rel", &self.histogram_rel_gap);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_input_census_has_no_nontrivial_classes() {
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let report = run_census(&s, 1).unwrap();
        assert_eq!(report.total_functions, 256);
        assert_eq!(report.nontrivial_class_count, 0);
        assert!(report.histogram_ns.is_empty());
    }

    #[test]
    fn report_is_thread_count_independent() {
        let s = Scenario::symmetric(2, 2, 2).unwrap();
        let a = run_census(&s, 1).unwrap();
        let b = run_census(&s, 2).unwrap();
        assert_eq!(a.class_count, b.class_count);
        assert_eq!(a.to_csv(), b.to_csv());
        let av: Vec<_> = a
            .bounds
            .iter()
            .map(|x| (&x.classical, &x.no_signaling))
            .collect();
        let bv: Vec<_> = b
            .bounds
            .iter()
            .map(|x| (&x.classical, &x.no_signaling))
            .collect();
        assert_eq!(av, bv);
    }
}
