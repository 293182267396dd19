//! Table and DOT emitters.

use std::fmt::Write;

use crate::algebra::{Algebra, Module};
use crate::complexes::ProjComplex;

/// One node per basis vector, one edge per nonzero arrow-matrix entry.
pub fn module_dot(name: &str, m: &Module) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
    body(&mut s, "", "  ", m);
    s.push_str("}\n");
    s
}

/// Several modules as clusters of one graph.
pub fn modules_dot(name: &str, ms: &[(String, Module)]) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
    for (k, (n, m)) in ms.iter().enumerate() {
        writeln!(s, "  subgraph \"cluster_{k}\" {{").unwrap();
        writeln!(s, "    label=\"{}\";", escape(n)).unwrap();
        body(&mut s, &format!("m{k}_"), "    ", m);
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

fn body(s: &mut String, prefix: &str, ind: &str, m: &Module) {
    let q = m.alg.quiver();
    let p = m.alg.prime();
    for (v, &d) in m.dims.iter().enumerate() {
        for k in 0..d {
            writeln!(s, "{ind}\"{prefix}{v}_{k}\" [label=\"{}\"];", escape(&q.vertices[v])).unwrap();
        }
    }
    for (a, mat) in q.arrows.iter().zip(&m.mats) {
        for r in 0..mat.rows() {
            for c in 0..mat.cols() {
                let x = mat.get(r, c);
                if x == 0 {
                    continue;
                }
                let label = if x == 1 {
                    a.name.clone()
                } else if x == p - 1 {
                    format!("-{}", a.name)
                } else {
                    format!("{x} {}", a.name)
                };
                writeln!(
                    s,
                    "{ind}\"{prefix}{}_{c}\" -> \"{prefix}{}_{r}\" [label=\"{}\"];",
                    a.source,
                    a.target,
                    escape(&label)
                )
                .unwrap();
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn dims_string(alg: &Algebra, dims: &[usize]) -> String {
    let q = alg.quiver();
    let parts: Vec<String> = dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(v, d)| format!("{}:{d}", q.vertices[v])).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        format!("[{}]", parts.join(" "))
    }
}

pub fn summands_string(alg: &Algebra, verts: &[usize]) -> String {
    if verts.is_empty() {
        return "0".into();
    }
    let q = alg.quiver();
    verts.iter().map(|&v| format!("P{}", q.vertices[v])).collect::<Vec<_>>().join(" + ")
}

pub fn proj_complex_table(alg: &Algebra, c: &ProjComplex) -> String {
    let mut s = String::new();
    let nz: Vec<usize> = (0..c.terms.len()).filter(|&k| !c.terms[k].is_empty()).collect();
    let (Some(&a), Some(&b)) = (nz.first(), nz.last()) else {
        return "  (zero complex)\n".into();
    };
    for k in a..=b {
        writeln!(s, "  degree {:>3}: {}", c.lo + k as i64, summands_string(alg, &c.terms[k])).unwrap();
    }
    s
}
