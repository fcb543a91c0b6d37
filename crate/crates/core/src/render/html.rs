use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{escape_xml, render_canvas_svg, RenderError, RenderOptions};
use crate::model::{Canvas, Iri, Manifest, Sequence};
use crate::resolve::{linearize_sequence, PathPolicy, RenderPlan};
use crate::validate::surfaces;

struct Site<'a> {
    manifest: &'a Manifest,
    /// 1-based page number of every canvas with a plan.
    pages: HashMap<&'a Iri, usize>,
}

impl Site<'_> {
    fn canvas_link(&self, c: &Iri, prefix: &str) -> String {
        let label = self.manifest.canvas(c).map_or_else(|| c.to_string(), |c| c.label.clone());
        let label = if label.is_empty() { c.to_string() } else { label };
        match self.pages.get(c) {
            Some(n) => format!(r#"<a href="{prefix}canvas/{n}.html">{}</a>"#, escape_xml(&label)),
            None => escape_xml(&label),
        }
    }
}

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n<title>{}</title>\n</head>\n<body>\n{body}</body>\n</html>\n",
        escape_xml(title)
    )
}

fn path_file(seq_index: usize, policy: PathPolicy) -> String {
    format!("paths/seq-{seq_index}-{}.html", policy.name())
}

fn path_switcher(seq_index: usize, current: Option<PathPolicy>, prefix: &str) -> String {
    let mut out = String::from("<p class=\"paths\">Reading paths:");
    for policy in PathPolicy::ALL {
        if Some(policy) == current {
            let _ = write!(out, " <strong>{policy}</strong>");
        } else {
            let _ = write!(out, r#" <a href="{prefix}{}">{policy}</a>"#, path_file(seq_index, policy));
        }
    }
    out.push_str("</p>\n");
    out
}

fn linearization_list(site: &Site, canvases: &[Iri], prefix: &str) -> String {
    let mut out = String::from("<ol class=\"linearization\">\n");
    for c in canvases {
        let _ = writeln!(out, "<li>{}</li>", site.canvas_link(c, prefix));
    }
    out.push_str("</ol>\n");
    out
}

fn index_page(site: &Site, policy: PathPolicy, unsequenced: &[Iri]) -> String {
    let m = site.manifest;
    let mut body = format!("<h1>{}</h1>\n", escape_xml(&m.label));
    for (k, s) in m.sequences.iter().enumerate() {
        let k = k + 1;
        let _ = writeln!(body, "<section class=\"sequence\" id=\"seq-{k}\">\n<h2>{}</h2>", escape_xml(&s.label));
        if s.has_alternatives() {
            body.push_str(&path_switcher(k, None, ""));
        }
        body.push_str(&linearization_list(site, &linearize_sequence(s, policy), ""));
        let ranges: Vec<_> = m.ranges.iter().filter(|r| r.sequence == s.id).collect();
        if !ranges.is_empty() {
            body.push_str("<nav class=\"toc\">\n<h3>Contents</h3>\n<ul>\n");
            for r in ranges {
                let label = escape_xml(&r.label);
                match r.targets.first().and_then(|t| site.pages.get(&t.canvas)) {
                    Some(n) => {
                        let _ = writeln!(body, r#"<li><a href="canvas/{n}.html">{label}</a></li>"#);
                    }
                    None => {
                        let _ = writeln!(body, "<li>{label}</li>");
                    }
                }
            }
            body.push_str("</ul>\n</nav>\n");
        }
        body.push_str("</section>\n");
    }
    if !unsequenced.is_empty() {
        body.push_str("<section class=\"unsequenced\">\n<h2>Other canvases</h2>\n");
        body.push_str(&linearization_list(site, unsequenced, ""));
        body.push_str("</section>\n");
    }
    page(&m.label, &body)
}

fn path_page(site: &Site, k: usize, s: &Sequence, policy: PathPolicy) -> String {
    let mut body = format!("<h1>{} ({policy})</h1>\n<p><a href=\"../index.html\">Index</a></p>\n", escape_xml(&s.label));
    body.push_str(&path_switcher(k, Some(policy), "../"));
    body.push_str(&linearization_list(site, &linearize_sequence(s, policy), "../"));
    page(&format!("{} ({policy})", s.label), &body)
}

fn canvas_page(site: &Site, c: &Canvas, n: usize, policy: PathPolicy, related: &BTreeSet<&Iri>) -> String {
    let m = site.manifest;
    let label = if c.label.is_empty() { c.id.to_string() } else { c.label.clone() };
    let mut body = format!("<h1>{}</h1>\n<p><a href=\"../index.html\">Index</a></p>\n", escape_xml(&label));
    let _ = writeln!(
        body,
        r#"<figure><img src="../svg/{n}.svg" width="{}" height="{}" alt="{}"/></figure>"#,
        c.width,
        c.height,
        escape_xml(&label)
    );
    for (k, s) in m.sequences.iter().enumerate() {
        // the chosen policy first, then any other path that differs
        let mut orders: Vec<(PathPolicy, Vec<Iri>)> = Vec::new();
        let policies = std::iter::once(policy).chain(PathPolicy::ALL.into_iter().filter(|p| *p != policy));
        for p in policies {
            let order = linearize_sequence(s, p);
            if !orders.iter().any(|(_, o)| *o == order) {
                orders.push((p, order));
            }
        }
        for (p, order) in orders {
            let Some(pos) = order.iter().position(|x| x == &c.id) else { continue };
            let name = if s.has_alternatives() {
                format!(r#"{} (<a href="../{}">{p}</a>)"#, escape_xml(&s.label), path_file(k + 1, p))
            } else {
                escape_xml(&s.label)
            };
            let _ = write!(body, "<nav class=\"sequence\">{name}:");
            if pos > 0 {
                let _ = write!(body, " previous {}", site.canvas_link(&order[pos - 1], "../"));
            }
            if let Some(next) = order.get(pos + 1) {
                let _ = write!(body, " next {}", site.canvas_link(next, "../"));
            }
            body.push_str("</nav>\n");
        }
    }
    if !related.is_empty() {
        body.push_str("<nav class=\"related\">Shares zones with:");
        for r in related {
            let _ = write!(body, " {}", site.canvas_link(r, "../"));
        }
        body.push_str("</nav>\n");
    }
    page(&label, &body)
}

/// The whole static site for a manifest, as relative path to file text:
/// `index.html`, `canvas/<n>.html` and `svg/<n>.svg` for every canvas with a
/// plan (numbered from 1 in manifest canvas order), and
/// `paths/seq-<k>-<policy>.html` for each sequence with alternatives.
///
/// Every canvas of the default sequence's linearization needs a plan.
/// Canvases of other sequences without one are listed unlinked.
pub fn render_manifest_html(m: &Manifest, plans: &[RenderPlan], opts: &RenderOptions) -> Result<BTreeMap<String, String>, RenderError> {
    let policy = opts.path_policy();
    let by_canvas: HashMap<&Iri, &RenderPlan> = plans.iter().map(|p| (&p.canvas.id, p)).collect();
    if let Some(s) = m.default_sequence() {
        if let Some(missing) = linearize_sequence(s, policy).into_iter().find(|c| !by_canvas.contains_key(c)) {
            return Err(RenderError::MissingPlan(missing));
        }
    }
    let pages: HashMap<&Iri, usize> = m
        .canvases
        .iter()
        .enumerate()
        .filter(|(_, c)| by_canvas.contains_key(&c.id))
        .map(|(i, c)| (&c.id, i + 1))
        .collect();
    let site = Site { manifest: m, pages };

    // canvases sharing a zone
    let zones_of: HashMap<&Iri, BTreeSet<Iri>> = m
        .canvases
        .iter()
        .map(|c| (&c.id, surfaces(m, &c.id).into_iter().skip(1).map(|(z, _)| z).collect()))
        .collect();

    let sequenced: BTreeSet<&Iri> = m.sequences.iter().flat_map(|s| s.reachable()).collect();
    let unsequenced: Vec<Iri> = m.canvases.iter().filter(|c| !sequenced.contains(&c.id)).map(|c| c.id.clone()).collect();

    let mut files = BTreeMap::new();
    files.insert("index.html".to_string(), index_page(&site, policy, &unsequenced));
    for (k, s) in m.sequences.iter().enumerate() {
        if s.has_alternatives() {
            for p in PathPolicy::ALL {
                files.insert(path_file(k + 1, p), path_page(&site, k + 1, s, p));
            }
        }
    }
    for (i, c) in m.canvases.iter().enumerate() {
        let Some(plan) = by_canvas.get(&c.id) else { continue };
        let n = i + 1;
        let own = &zones_of[&c.id];
        let related: BTreeSet<&Iri> = m
            .canvases
            .iter()
            .filter(|o| o.id != c.id && !own.is_disjoint(&zones_of[&o.id]))
            .map(|o| &o.id)
            .collect();
        files.insert(format!("canvas/{n}.html"), canvas_page(&site, c, n, policy, &related));
        files.insert(format!("svg/{n}.svg"), render_canvas_svg(plan, opts));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::resolve::{flatten_all, ChoicePolicy};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/h/{s}")).unwrap()
    }

    fn three_pages() -> Manifest {
        let mut b = ManifestBuilder::new(iri("m"), "Three & more");
        let items = (1..=3)
            .map(|i| SequenceItem::Single(b.canvas(iri(&format!("p{i}")), format!("p. {i}"), 10, 10).unwrap()))
            .collect();
        b.sequence(iri("s"), "Pages", items).unwrap();
        b.range(iri("r"), "Middle", &iri("s"), vec![RangeTarget::whole(iri("p2"))]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn linear_site() {
        let m = three_pages();
        let plans = flatten_all(&m, &ChoicePolicy::default()).unwrap();
        let files = render_manifest_html(&m, &plans, &RenderOptions::default()).unwrap();
        let names: Vec<&str> = files.keys().map(String::as_str).collect();
        assert_eq!(names, ["canvas/1.html", "canvas/2.html", "canvas/3.html", "index.html", "svg/1.svg", "svg/2.svg", "svg/3.svg"]);
        assert!(files["index.html"].contains("<title>Three &amp; more</title>"));
        assert!(files["index.html"].contains(r#"<li><a href="canvas/2.html">Middle</a></li>"#));
        let middle = &files["canvas/2.html"];
        assert!(middle.contains(r#"previous <a href="../canvas/1.html">p. 1</a> next <a href="../canvas/3.html">p. 3</a>"#));
        assert!(!files["canvas/1.html"].contains("previous"));
        assert!(!files["canvas/3.html"].contains("next"));
    }

    #[test]
    fn missing_plan() {
        let m = three_pages();
        let mut plans = flatten_all(&m, &ChoicePolicy::default()).unwrap();
        plans.remove(1);
        assert_eq!(render_manifest_html(&m, &plans, &RenderOptions::default()), Err(RenderError::MissingPlan(iri("p2"))));
    }
}
