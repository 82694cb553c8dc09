//! Published values, compared against what a run actually computed.

use num_bigint::BigInt;

use super::report::*;
use crate::exactmath::{parse_decimal, Rational};
use crate::matveev::Stage;
use crate::search::SolutionRow;

fn entry(quantity: &str, relation: Relation, reference: &str, computed: String, matches: bool) -> ReferenceMatch {
    ReferenceMatch { quantity: quantity.into(), relation, reference: reference.into(), computed, matches }
}

fn cmp_rational(quantity: &str, relation: Relation, reference: &str, computed: &Rational) -> ReferenceMatch {
    let r = parse_decimal(reference).expect("reference literal");
    let ok = match relation {
        Relation::Eq => computed == &r,
        Relation::Le => computed <= &r,
        Relation::Ge => computed >= &r,
    };
    let shown = super::serde_decimal::to_string(computed).unwrap_or_else(|| computed.to_string());
    entry(quantity, relation, reference, shown, ok)
}

fn cmp_int(quantity: &str, relation: Relation, reference: &str, computed: &BigInt) -> ReferenceMatch {
    cmp_rational(quantity, relation, reference, &Rational::from_integer(computed.clone()))
}

fn tuples(rows: &[SolutionRow]) -> String {
    let v: Vec<String> = rows.iter().map(|r| format!("({},{},{},{})", r.n, r.l, r.k, r.m)).collect();
    format!("{{{}}}", v.join(","))
}

/// Every published value that the run reached, with a match flag.
pub fn reference_matches(report: &ProofReport) -> Vec<ReferenceMatch> {
    use Relation::*;
    let mut out = Vec::new();
    if let Some(s) = report.stage(Stage::Analytic) {
        let b = &s.bounds;
        out.push(cmp_int("analytic n_max", Le, "4.64e34", &b.n_max));
        out.push(cmp_int("analytic n_max", Ge, "1e33", &b.n_max));
        out.push(cmp_int("analytic m_max", Le, "1.31e14", &b.m_max));
        out.push(cmp_int("analytic l_max", Eq, "157", &b.l_max.into()));
        out.push(cmp_int("analytic k_max", Eq, "167", &b.k_max.into()));
    }
    for (stage, round) in [(Stage::Reduced1, 1u8), (Stage::Reduced2, 2u8)] {
        let Some(s) = report.stage(stage) else { continue };
        let StageDetail::Reduction(r) = &s.detail else { continue };
        let sm = &r.summary;
        let name = |q: &str| format!("round {round} {q}");
        if round == 1 {
            out.push(cmp_int(&name("M"), Eq, "131000000000167", &sm.m_bound));
            out.push(cmp_int(&name("max q"), Eq, "25431328747122828658870707509980696460342", &sm.max_q));
            if let Some(o) = sm.table.iter().find(|o| o.l == 154) {
                out.push(cmp_int(&name("convergent index at l = 154"), Eq, "75", &o.q_index.into()));
            }
            out.push(cmp_rational(&name("min epsilon"), Ge, "1.5e-28", &sm.min_epsilon));
            out.push(cmp_rational(&name("omega bound"), Le, "226.1", sm.omega()));
            out.push(cmp_int(&name("m_max"), Eq, "227", &sm.m_max));
            out.push(cmp_int(&name("n_max"), Eq, "61466", &r.n_from_sizes));
            out.push(cmp_int("re-derived l_max", Eq, "18", &r.thresholds.0.into()));
            out.push(cmp_int("re-derived k_max", Eq, "24", &r.thresholds.1.into()));
        } else {
            out.push(cmp_int(&name("M"), Eq, "251", &sm.m_bound));
            if let Some(o) = sm.table.iter().find(|o| o.l == 16) {
                out.push(cmp_int(&name("q at l = 16"), Eq, "61976", &o.q));
                out.push(cmp_int(&name("convergent index at l = 16"), Eq, "6", &o.q_index.into()));
            }
            out.push(cmp_rational(&name("min epsilon"), Ge, "0.001274174011265825", &sm.min_epsilon));
            out.push(cmp_rational(&name("omega bound"), Le, "26.7", sm.omega()));
            out.push(cmp_int(&name("m_max"), Eq, "27", &sm.m_max));
            out.push(cmp_int(&name("n_max"), Eq, "869", &r.n_from_sizes));
        }
    }
    if let Some(s) = report.stage(Stage::Searched) {
        if let StageDetail::Search(d) = &s.detail {
            let fb = tuples(&d.final_box.solutions);
            out.push(entry("final box solutions", Eq, "{}", fb.clone(), fb == "{}"));
            let m1 = tuples(&d.m_one.solutions);
            out.push(entry("m = 1 solutions", Eq, "{(3,3,1,1),(6,3,3,1)}", m1.clone(), m1 == "{(3,3,1,1),(6,3,3,1)}"));
        }
        let v = tuples(&report.verdict);
        out.push(entry("verdict", Eq, "{(6,3,3,1)}", v.clone(), v == "{(6,3,3,1)}"));
    }
    out
}
