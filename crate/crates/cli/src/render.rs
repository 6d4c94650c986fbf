//! DOT and text-barcode renderings.

use std::fmt::Write;

use lattice_pd::{FiniteMetricLattice, IntervalFunction};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, bottom at the bottom.
pub fn lattice_dot(p: &FiniteMetricLattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
    for name in p.names() {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  {} -> {};", quote(p.name(a)), quote(p.name(b)));
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of `Int P` with each interval labelled by its value.
pub fn function_dot(f: &IntervalFunction) -> String {
    let index = f.index();
    let int = index.lattice();
    let mut out = String::from("digraph intervals {\n  rankdir=BT;\n");
    for k in 0..index.len() {
        let label = format!("{}\\n{}", index.name(k), f.value(k));
        let style = if f.value(k) != 0 { ", style=bold" } else { "" };
        let _ = writeln!(out, "  n{k} [label=\"{label}\"{style}];");
    }
    for (i, j) in int.covers() {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    out.push_str("}\n");
    out
}

/// One bar per non-zero interval over a totally ordered base, drawn on a
/// column grid of the elements; repeated multiplicity is written, not drawn.
pub fn barcode(f: &IntervalFunction) -> String {
    let base = f.base();
    let order = base.linear_extension();
    let width = base.names().iter().map(|n| n.chars().count()).max().unwrap_or(1) + 2;
    let column = |a: usize| order.iter().position(|&x| x == a).expect("element of the chain") * width;
    let mut out = String::new();
    for &a in order {
        let _ = write!(out, "{:<width$}", base.name(a));
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    let span = order.len() * width;
    for (k, iv) in f.index().intervals().iter().enumerate() {
        let v = f.value(k);
        if v == 0 {
            continue;
        }
        let (lo, hi) = (column(iv.lo), column(iv.hi));
        let mut row: Vec<char> = vec![' '; span];
        for c in row.iter_mut().take(hi + 1).skip(lo) {
            *c = '-';
        }
        row[lo] = if v < 0 { 'x' } else { '*' };
        row[hi] = if v < 0 { 'x' } else { '*' };
        let bar: String = row.into_iter().collect();
        let _ = writeln!(out, "{bar} {} x{v}", f.index().name(k));
    }
    out
}
