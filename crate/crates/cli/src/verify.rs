//! Built-in table of known values, recomputed from scratch.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::json;
use tcc_core::lens::{diffeo_realizable, diffeo_realizable_units, normal_form_from_alphas, Realizability};
use tcc_core::{
    betti_table, build_cosphere_diagram, build_lens_cone, classify_pair, lens_normal_form, make_reeb_vector,
    moment_cone, Pi1Info, Verdict,
};

use crate::commands::{Failure, Outcome, EXIT_OK, EXIT_VERIFY};
use crate::report::{print_json, set, tuple};

struct Item {
    name: String,
    expected: String,
    actual: String,
}

impl Item {
    fn new(name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        Item { name: name.into(), expected: expected.into(), actual: actual.into() }
    }

    fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn fail_text(e: impl std::fmt::Display) -> String {
    format!("error: {e}")
}

const L7_A: [i64; 4] = [-3, 1, 1, 1];
const L7_B: [i64; 4] = [1, -1, -1, 1];
const L13_A: [i64; 7] = [1, 1, 1, 1, 2, -2, 1];
const L13_B: [i64; 7] = [1, -1, -1, -1, -2, -2, 1];
const L15: [i64; 8] = [1, 1, 1, 2, -2, -2, -2, 1];

fn degree_items(items: &mut Vec<Item>) {
    for (label, w, g) in [
        ("L7_5(-3,1,1,1)", &L7_A[..], "(2,0,4,2,6)"),
        ("L7_5(1,-1,-1,1)", &L7_B[..], "(2,2,2,2,6)"),
        ("L13_5(1,1,1,1,2,-2,1)", &L13_A[..], "(2,4,6,8,12)"),
        ("L13_5(1,-1,-1,-1,-2,-2,1)", &L13_B[..], "(6,4,6,4,12)"),
        ("L15_5(1,1,1,2,-2,-2,-2,1)", &L15[..], "(4,4,8,8,14)"),
    ] {
        let actual = lens_normal_form(5, w).map_or_else(fail_text, |f| tuple(&f.degrees()));
        items.push(Item::new(format!("g(1..5) of {label}"), g, actual));
    }
}

fn cbs_of(n: usize, p: u64, alphas: &[i64]) -> String {
    normal_form_from_alphas(n, p, alphas).map_or_else(fail_text, |f| tuple(&f.cbs()))
}

fn cbs_items(items: &mut Vec<Item>) {
    for (n, alphas, expected) in [
        (3, vec![-1, -1], "(1,3,4)"),
        (3, vec![1, 1], "(0,4,4)"),
        (6, vec![-1, -1, -1, -2, 2], "(0,1,2,3,4,4)"),
        (6, vec![1, 1, 1, 2, 2], "(0,0,2,4,4,4)"),
    ] {
        items.push(Item::new(format!("cbs({n},5,{})", tuple(&alphas)), expected, cbs_of(n, 5, &alphas)));
    }
    for p in [3u64, 5, 7, 9] {
        let pi = p as i64;
        let a = (1..pi).find(|a| a.gcd(&pi) == 1 && (a - 1).gcd(&pi) == 1).expect("admissible alpha");
        items.push(Item::new(
            format!("cbs(2,{p},({a}))"),
            tuple(&[(p - 1) / 2, p - 1]),
            cbs_of(2, p, &[a]),
        ));
    }
    // L_p(1,…,1) with n + 1 = kp: cb_{2s} = j for kj − 1 ≤ s < k(j+1) − 1.
    for n in 1..=6usize {
        for p in (2..=n as u64 + 1).filter(|p| (n as u64 + 1).is_multiple_of(*p)) {
            let k = (n as u64 + 1) / p;
            let expected: Vec<u64> = (0..n as u64)
                .map(|s| (1..p).find(|&j| k * j <= s + 1 && s + 1 < k * (j + 1)).unwrap_or(0))
                .collect();
            let actual = lens_normal_form(p, &vec![1; n + 1]).map_or_else(fail_text, |f| tuple(&f.cbs()));
            items.push(Item::new(format!("cbs of L_{p}(1^{}) (n={n})", n + 1), tuple(&expected), actual));
        }
    }
    for n in 2..=6usize {
        let expected: Vec<usize> = (1..=n).collect();
        items.push(Item::new(
            format!("cbs({n},{},(-1,...,-1))", n + 1),
            tuple(&expected),
            cbs_of(n, n as u64 + 1, &vec![-1; n - 1]),
        ));
    }
    for n in [1usize, 3, 5] {
        let zeros = (n - 1) / 2;
        let expected: Vec<u64> = (0..n).map(|j| (j >= zeros) as u64).collect();
        items.push(Item::new(format!("cbs of RP^{}", 2 * n + 1), tuple(&expected), cbs_of(n, 2, &vec![-1; n - 1])));
    }
}

fn cosphere_items(items: &mut Vec<Item>) {
    let cap = 12;
    for p in 1..=15u64 {
        for q in (1..=p).filter(|q| q.gcd(&p) == 1) {
            let expected_totals: Vec<u64> = (0..=cap)
                .step_by(2)
                .map(|d| match d {
                    0 => p - 1,
                    2 => 2 * p - 1,
                    _ => 2 * p,
                })
                .collect();
            let class_row = |k: u64| -> Vec<u64> {
                (0..=cap)
                    .step_by(2)
                    .map(|d| match (k, d) {
                        (0, 0) => 0,
                        (0, 2) | (_, 0) => 1,
                        _ => 2,
                    })
                    .collect()
            };
            let expected = format!(
                "order {p}; totals {}; classes {}",
                tuple(&expected_totals),
                (0..p).map(|k| tuple(&class_row(k))).collect::<Vec<_>>().join(" ")
            );
            let actual = (|| -> tcc_core::Result<String> {
                let d = build_cosphere_diagram(p, q)?;
                let cone = moment_cone(&d);
                let origin = vec![BigRational::from_integer(BigInt::from(0)); 2];
                let t = betti_table(&cone, &make_reeb_vector(&d, &origin, None)?, cap)?;
                let totals: Vec<u64> = t.totals.values().copied().collect();
                let classes: Vec<String> = t.by_class.iter().map(|c| tuple(&c.values().copied().collect::<Vec<_>>())).collect();
                Ok(format!("order {}; totals {}; classes {}", t.order, tuple(&totals), classes.join(" ")))
            })()
            .unwrap_or_else(fail_text);
            items.push(Item::new(format!("cosphere tables S*L3_{p}({q}) to degree {cap}"), expected, actual));
        }
    }
}

fn pi1_items(items: &mut Vec<Item>) {
    for p in 1..=15u64 {
        let mut orders = Vec::new();
        for q in (1..=p).filter(|q| q.gcd(&p) == 1) {
            let order = build_cosphere_diagram(p, q)
                .and_then(|d| Pi1Info::new(&moment_cone(&d)))
                .map_or_else(fail_text, |i| i.order.to_string());
            orders.push(order);
        }
        orders.dedup();
        items.push(Item::new(format!("pi1 order of every parallelogram with p={p}"), set(&[p]), set(&orders)));
    }
    for (n, p, alphas) in [(3usize, 5u64, vec![-1i64, -1]), (6, 5, vec![1, 1, 1, 2, 2]), (2, 1, vec![1])] {
        let actual = build_lens_cone(n, p, &alphas)
            .and_then(|c| Pi1Info::new(&c))
            .map_or_else(fail_text, |i| i.order.to_string());
        items.push(Item::new(format!("pi1 order of lens cone ({n},{p},{})", tuple(&alphas)), p.to_string(), actual));
    }
}

fn headline_items(items: &mut Vec<Item>) {
    let l13_pair = classify_pair(5, &L13_A, &L13_B).map_or_else(fail_text, |c| {
        format!(
            "diffeomorphic={} even={} verdict={} cbs={} vs {}",
            c.diffeo.equivalent(),
            c.diffeo.even_witness,
            c.verdict,
            tuple(&c.cbs_first),
            tuple(&c.cbs_second)
        )
    });
    items.push(Item::new(
        "two contact structures on L13_5",
        format!(
            "diffeomorphic=true even=true verdict={} cbs=(0,1,2,3,4,4) vs (0,0,2,4,4,4)",
            Verdict::DistinguishedByCbs
        ),
        l13_pair,
    ));
    let sym = lens_normal_form(5, &L15).map_or_else(fail_text, |f| set(&f.contact_symmetry_set()));
    items.push(Item::new("contact symmetry set of L15_5", "{1}", sym));
    let real = match diffeo_realizable(5, &L15, 2) {
        Ok(Realizability::Realizable { u }) => format!("realizable u={u}"),
        Ok(other) => format!("{other:?}"),
        Err(e) => fail_text(e),
    };
    items.push(Item::new("Delta(t^2) = t^u Delta(t) on L15_5", "realizable u=4", real));
    let units = diffeo_realizable_units(5, &L15)
        .map_or_else(fail_text, |v| set(&v.iter().map(|(k, _)| *k).collect::<Vec<_>>()));
    items.push(Item::new("diffeo-realizable units of L15_5 (contain {1,4} strictly)", "{1,2,3,4}", units));
    let homotopy = diffeo_realizable(5, &L13_A, 2).map_or_else(fail_text, |r| format!("{r:?}"));
    items.push(Item::new(
        "k=2 on L13_5 fails k^(n+1) = 1",
        format!("{:?}", Realizability::FailsHomotopyCondition { power: 3 }),
        homotopy,
    ));
    let nf = lens_normal_form(5, &L13_A).map_or_else(fail_text, |f| {
        let a: Vec<i64> = f.alphas.iter().map(|a| a.rem_euclid(5)).collect();
        format!("n={} alpha={} alpha0={} a_n={}", f.n, tuple(&a), f.alpha0.rem_euclid(5), f.a_n)
    });
    items.push(Item::new("normal form of L13_5(1,1,1,1,2,-2,1)", "n=6 alpha=(4,4,4,3,2) alpha0=1 a_n=1", nf));
}

pub fn run(as_json: bool, corrupt: bool) -> Outcome {
    let mut items = Vec::new();
    degree_items(&mut items);
    cbs_items(&mut items);
    cosphere_items(&mut items);
    pi1_items(&mut items);
    headline_items(&mut items);
    if corrupt {
        items[0].expected = "(2,0,4,2,8)".into();
    }
    let failed = items.iter().filter(|i| !i.passed()).count();
    if as_json {
        print_json(&json!({
            "items": items.iter().map(|i| json!({
                "name": i.name,
                "expected": i.expected,
                "actual": i.actual,
                "pass": i.passed(),
            })).collect::<Vec<_>>(),
            "passed": items.len() - failed,
            "failed": failed,
        }));
    } else {
        for i in &items {
            if i.passed() {
                println!("PASS  {}: {}", i.name, i.actual);
            } else {
                println!("FAIL  {}: expected {}, got {}", i.name, i.expected, i.actual);
            }
        }
        println!("{} of {} checks passed", items.len() - failed, items.len());
    }
    if failed > 0 {
        return Err(Failure { code: EXIT_VERIFY, message: format!("{failed} check(s) failed") });
    }
    Ok(EXIT_OK)
}
