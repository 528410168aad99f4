//! Parsing of module names (`S_001`, `T_1+2,0`, `P_0`) and resolution
//! against a built algebra.

use anyhow::{anyhow, bail, Result};

use blockforge_core::algebra::Algebra;
use blockforge_core::presentations::VertexId;
use blockforge_core::repmod::{biserial_t, projective, uniserial, PairSpec, Representation};

/// Splits a label body into vertex ids.  When every vertex label is a single
/// character the body is read character by character (`S_001`); otherwise
/// labels are comma-separated (`S_a,b,a`).
fn parse_labels(alg: &Algebra, body: &str) -> Result<Vec<VertexId>> {
    let quiver = alg.quiver();
    let single_char = quiver.vertex_labels().iter().all(|l| l.len() == 1);
    let parts: Vec<String> = if single_char && !body.contains(',') {
        body.chars().map(|c| c.to_string()).collect()
    } else {
        body.split(',').map(|s| s.to_string()).collect()
    };
    parts
        .iter()
        .map(|p| {
            quiver
                .vertex_id(p)
                .ok_or_else(|| anyhow!("unknown vertex `{p}` in module name"))
        })
        .collect()
}

fn parse_pair_side(alg: &Algebra, body: &str) -> Result<PairSpec> {
    if let Some((a, b)) = body.split_once('+') {
        let va = parse_labels(alg, a)?;
        let vb = parse_labels(alg, b)?;
        if va.len() != 1 || vb.len() != 1 {
            bail!("a pair side must name exactly two vertices, got `{body}`");
        }
        Ok(PairSpec::Pair(va[0], vb[0]))
    } else {
        let v = parse_labels(alg, body)?;
        if v.len() != 1 {
            bail!("expected a single vertex, got `{body}`");
        }
        Ok(PairSpec::Single(v[0]))
    }
}

/// Builds the module named by `name` over `alg`.
///
/// `S_<labels>` resolves through the uniserial constructor, `T_<a>,<b>+<c>`
/// and `T_<b>+<c>,<a>` through the two-layer constructor, and `P_<v>` is the
/// projective indecomposable.
pub fn resolve_module(alg: &Algebra, name: &str) -> Result<Representation> {
    if let Some(body) = name.strip_prefix("S_") {
        let labels = parse_labels(alg, body)?;
        return uniserial(alg, &labels).map_err(|e| anyhow!("{name}: {e}"));
    }
    if let Some(body) = name.strip_prefix("T_") {
        // exactly one of the two comma-separated sides carries a `+`
        let commas: Vec<usize> =
            body.char_indices().filter(|(_, c)| *c == ',').map(|(i, _)| i).collect();
        for &cut in &commas {
            let (top, bottom) = (&body[..cut], &body[cut + 1..]);
            if top.contains('+') == bottom.contains('+') {
                continue;
            }
            let (Ok(t), Ok(b)) = (parse_pair_side(alg, top), parse_pair_side(alg, bottom)) else {
                continue;
            };
            return biserial_t(alg, t, b).map_err(|e| anyhow!("{name}: {e}"));
        }
        bail!("could not parse `{name}` as a two-layer module name");
    }
    if let Some(body) = name.strip_prefix("P_") {
        let labels = parse_labels(alg, body)?;
        if labels.len() != 1 {
            bail!("projectives are named by a single vertex, got `{name}`");
        }
        return projective(alg, labels[0]).map_err(|e| anyhow!("{name}: {e}"));
    }
    bail!("unrecognized module name `{name}` (expected S_…, T_…, or P_…)");
}
