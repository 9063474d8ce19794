use anyhow::Result;
use scramblekit::divisor::{reduce, FiringScript};
use scramblekit::families::FamilySpec;
use scramblekit::report::InvariantReport;
use scramblekit::scramble::{CutBound, OrderCertificate, Scramble};
use scramblekit::search::SnSearchResult;
use scramblekit::treewidth::TreewidthResult;
use scramblekit::{Divisor, GonalityResult, Multigraph, VertexSet};
use std::io::Write;
use std::time::Duration;

pub struct Out {
    sink: Box<dyn Write>,
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn chips(d: &Divisor) -> String {
    join(d.chips())
}

fn braces(s: &VertexSet) -> String {
    format!("{{{s}}}")
}

impl Out {
    pub fn stdout() -> Self {
        Out { sink: Box::new(std::io::stdout().lock()) }
    }

    pub fn human(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.sink, "{}", line.as_ref());
    }

    pub fn machine(&mut self, record: impl AsRef<str>) {
        let _ = writeln!(self.sink, "::{}", record.as_ref());
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.machine(format!("{key}={value}"));
    }

    fn key(prefix: &str, key: &str) -> String {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    }

    pub fn certificate(&mut self, prefix: &str, s: &Scramble, cert: &OrderCertificate) {
        let k = |key: &str| Self::key(prefix, key);
        self.human(format!("scramble order: {} ({} eggs)", cert.order, s.len()));
        for egg in s.eggs() {
            self.kv(&k("egg"), egg);
        }
        self.kv(&k("order"), cert.order);
        self.human(format!("hitting-set: {} size: {}", braces(&cert.hitting_set), cert.hitting_number));
        self.kv(&k("hitting"), cert.hitting_number);
        self.kv(&k("hitting_set"), &cert.hitting_set);
        match (&cert.cut_number, &cert.cut_witness) {
            (CutBound::Finite(v), Some(w)) => {
                let (a, b) = (&s.eggs()[w.egg_a], &s.eggs()[w.egg_b]);
                self.human(format!(
                    "cut-pair: {} | {} value: {v} side: {}",
                    braces(a),
                    braces(b),
                    braces(&w.side)
                ));
                self.kv(&k("cut"), v);
                self.kv(&k("cut_pair"), format!("{}|{}", a, b));
                self.kv(&k("cut_side"), &w.side);
            }
            _ => {
                self.human("cut-pair: none (no two eggs are disjoint)");
                self.kv(&k("cut"), "inf");
            }
        }
    }

    pub fn treewidth(&mut self, r: &TreewidthResult, took: Duration) {
        self.human(format!("treewidth: {} [{took:.2?}]", r.width));
        self.human(format!("elimination order: {}", join(&r.elimination_order)));
        self.kv("tw", r.width);
        self.kv("tw.order", join(&r.elimination_order));
    }

    pub fn gonality(&mut self, r: &GonalityResult, took: Duration) {
        self.human(format!("gonality: {} witness: {} [{took:.2?}]", r.gonality, r.witness));
        self.kv("gon", r.gonality);
        self.kv("gon.witness", chips(&r.witness));
    }

    pub fn search(&mut self, key: &str, label: &str, r: &SnSearchResult, took: Duration) {
        let kind = if r.exhaustive { "exact" } else { "lower bound" };
        self.human(format!("{label}: {} ({kind}, via {}) [{took:.2?}]", r.value, r.strategy));
        self.kv(key, r.value);
        self.kv(&format!("{key}.exhaustive"), r.exhaustive);
        self.kv(&format!("{key}.strategy"), &r.strategy);
        self.certificate(key, &r.best_scramble, &r.certificate);
    }

    pub fn reduction(&mut self, d: &Divisor, v: usize, reduced: &Divisor, script: &FiringScript) {
        self.human(format!("{d} reduces at v{v} to {reduced} in {} firing step(s)", script.steps.len()));
        for step in &script.steps {
            self.human(format!("fire {} x{}", braces(&step.set), step.times));
            self.kv("fire", format!("{} {}", step.times, step.set));
        }
        self.kv("reduced", chips(reduced));
    }

    pub fn rank(&mut self, g: &Multigraph, d: &Divisor, positive: bool) -> Result<()> {
        self.human(format!("{d}: {}", if positive { "positive rank" } else { "rank below one" }));
        for v in 0..g.n() {
            let (reduced, _) = reduce(g, d, v)?;
            self.kv(&format!("reduced.v{v}"), chips(&reduced));
        }
        self.kv("positive_rank", positive);
        Ok(())
    }

    pub fn report(&mut self, r: &InvariantReport) {
        self.human(format!("graph: {} vertices, {} edges, hash {:016x}", r.n, r.edge_count, r.graph_hash));
        self.kv("n", r.n);
        self.kv("edges", r.edge_count);
        self.kv("hash", format!("{:016x}", r.graph_hash));
        let took = |stage: &str| {
            r.timings
                .iter()
                .find(|(s, _)| *s == stage)
                .map_or(Duration::ZERO, |&(_, d)| d)
        };
        if let Some(tw) = &r.treewidth {
            self.treewidth(tw, took("treewidth"));
        }
        if let Some(s) = &r.sn_lower {
            self.search("sn_lower", "scramble number lower bound", s, took("sn-lower"));
        }
        if let Some(s) = &r.sn_exact {
            self.search("sn_exact", "scramble number", s, took("sn-exact"));
        }
        if let Some(gon) = &r.gonality {
            self.gonality(gon, took("gonality"));
        }
        self.human(format!("sandwich tw ≤ sn ≤ gon: {}", if r.sandwich_ok { "ok" } else { "VIOLATED" }));
        self.kv("sandwich_ok", r.sandwich_ok);
    }

    pub fn sweep_line(&mut self, spec: &FamilySpec, r: &InvariantReport) {
        let mut fields = vec![format!("family={spec}"), format!("n={}", r.n), format!("hash={:016x}", r.graph_hash)];
        if let Some(tw) = &r.treewidth {
            fields.push(format!("tw={}", tw.width));
        }
        if let Some(s) = &r.sn_lower {
            fields.push(format!("sn_lower={}", s.value));
        }
        if let Some(s) = &r.sn_exact {
            fields.push(format!("sn_exact={}", s.value));
        }
        if let Some(g) = &r.gonality {
            fields.push(format!("gon={}", g.gonality));
        }
        fields.push(format!("sandwich_ok={}", r.sandwich_ok));
        let total: Duration = r.timings.iter().map(|(_, d)| *d).sum();
        self.human(format!("{spec}: {} [{total:.2?}]", if r.sandwich_ok { "ok" } else { "VIOLATED" }));
        self.machine(format!("instance {}", fields.join(" ")));
    }
}
