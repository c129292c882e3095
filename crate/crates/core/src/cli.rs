use std::any::Any;
use std::fs;
use std::io::Read as _;

use num_traits::{One, Signed, Zero};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use prolim::bisystem::{check_squares, tau, BiSystem, Window};
use prolim::fgab::{FgAbGroup, Subgroup};
use prolim::linalg::{hnf, snf, IntMatrix};
use prolim::nerve::{nerve, nerve_skeleton, Cover, CoverJson};
use prolim::posetlim::{derived_limits, random::random_diagram, FinitePosetDiagram, PosetDiagramJson};
use prolim::scenarios::{self, verify_milnor, Check, ComplexTower, ScenarioReport, Tail};
use prolim::simplicial::{
    check_cochain_pullback, cohomology, homology, mapping_cylinder, random::random_pullback_data, PullbackCheckJson,
    SimplicialComplex, SimplicialMap, SimplicialMapJson, TelescopeJson,
};
use prolim::towers::{lim, lim1_class, lim1_fg, lim_fg_check, random::random_tower, roos_shift_check, LimResult, Tower};
use prolim::{Error, Result};

use crate::{BuiltinTower, Command, Io, ScenarioArgs, ScenarioName, VerifyArgs, VerifyTarget};

pub struct Outcome {
    pub command: String,
    pub result: Value,
    pub checks: Vec<Check>,
}

impl Outcome {
    fn new(command: &str, result: Value, checks: Vec<Check>) -> Outcome {
        Outcome { command: command.into(), result, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn narrative(&self) -> String {
        let mut s = format!("prolim {}: {}\n", self.command, if self.passed() { "all checks pass" } else { "some checks FAIL" });
        for c in &self.checks {
            s.push_str(&format!("  [{}] {}: {}\n", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail));
        }
        s
    }

    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "result": self.result,
            "certificates": self.checks,
            "passed": self.passed(),
            "narrative": self.narrative(),
        })
    }
}

pub fn write_outcome(o: &Outcome, io: &Io) -> Result<()> {
    let text = serde_json::to_string_pretty(&o.to_json()).map_err(|e| Error::Invalid(e.to_string()))?;
    match &io.out {
        Some(p) => {
            fs::write(p, text + "\n").map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display())))?;
            eprint!("{}", o.narrative());
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn panic_message(p: &Box<dyn Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "internal error".into())
}

fn read_input<T: DeserializeOwned>(io: &Io) -> Result<T> {
    let text = match &io.input {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("bad input: {e}")))
}

pub fn run(cmd: &Command, io: &Io) -> Result<Outcome> {
    match cmd {
        Command::Snf => run_snf(io),
        Command::Homology { dim } => run_homology(io, *dim),
        Command::Tower => run_tower(io),
        Command::Posetlim => run_posetlim(io),
        Command::Nerve => run_nerve(io),
        Command::Bisystem => run_bisystem(io),
        Command::Cylinder => run_cylinder(io),
        Command::Telescope => run_telescope(io),
        Command::PullbackCheck => run_pullback(io),
        Command::Scenario(a) => run_scenario(io, a),
        Command::Verify(a) => run_verify(io, a),
    }
}

fn strings(gs: &[FgAbGroup]) -> Vec<String> {
    gs.iter().map(ToString::to_string).collect()
}

fn run_snf(io: &Io) -> Result<Outcome> {
    let a: IntMatrix = read_input(io)?;
    let s = snf(&a);
    let ud = &(&s.u * &a) * &s.v;
    let inv = &s.u * &s.u_inv;
    let square_unimodular = |m: &IntMatrix| {
        let t = snf(m);
        t.rank == m.rows() && t.invariant_factors().iter().all(|d| d.abs().is_one())
    };
    let f = s.invariant_factors();
    let chain = f.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
    let checks = vec![
        Check::new("uav_equals_d", ud == s.d, "U * A * V recomputed and compared entrywise with D"),
        Check::new("u_inverse", inv == IntMatrix::identity(a.rows()), "U * U^-1 = I"),
        Check::new("v_unimodular", square_unimodular(&s.v), "V has all invariant factors 1"),
        Check::new("divisibility", chain && f.iter().all(|d| d.is_positive()), format!("invariant factors {:?}", f.iter().map(ToString::to_string).collect::<Vec<_>>())),
    ];
    let result = json!({"u": s.u, "d": s.d, "v": s.v, "rank": s.rank, "invariant_factors": f.iter().map(ToString::to_string).collect::<Vec<_>>(), "hnf": hnf(&a)});
    Ok(Outcome::new("snf", result, checks))
}

fn run_homology(io: &Io, dim: Option<usize>) -> Result<Outcome> {
    let k: SimplicialComplex = read_input(io)?;
    let top = dim.unwrap_or(k.dimension().max(0) as usize);
    let h: Vec<FgAbGroup> = (0..=top).map(|n| homology(&k, n)).collect();
    let c: Vec<FgAbGroup> = (0..=top).map(|n| cohomology(&k, n)).collect();
    let mut checks = Vec::new();
    let uct = (0..=top).all(|n| {
        let ext = if n == 0 { Vec::new() } else { h[n - 1].torsion().to_vec() };
        c[n].free_rank() == h[n].free_rank() && c[n].torsion() == ext.as_slice()
    });
    checks.push(Check::new("universal_coefficients", uct, "H^n = Hom(H_n, Z) + Ext(H_{n-1}, Z) in every degree"));
    if top as isize >= k.dimension() {
        let chi: i64 = h.iter().enumerate().map(|(n, g)| if n % 2 == 0 { g.free_rank() as i64 } else { -(g.free_rank() as i64) }).sum();
        checks.push(Check::new("euler_characteristic", chi == k.euler_characteristic(), format!("alternating rank sum {chi}")));
    }
    let result = json!({"simplices": (0..=top).map(|d| k.count(d)).collect::<Vec<_>>(), "homology": strings(&h), "cohomology": strings(&c)});
    Ok(Outcome::new("homology", result, checks))
}

fn lim_json(l: &LimResult) -> Value {
    match l {
        LimResult::Group(g) => json!({"group": g.group.to_string(), "anchor": g.anchor, "certificate": g.certificate}),
        LimResult::ProNormalForm { reason, .. } => json!({"group": null, "reason": reason}),
    }
}

fn run_tower(io: &Io) -> Result<Outcome> {
    let t: Tower = read_input(io)?;
    let depth = io.depth.unwrap_or(4).max(2);
    let l = lim(&t);
    let c = lim1_class(&t);
    let fg = lim1_fg(&t)?;
    let roos = roos_shift_check(&t, depth)?;
    let mut checks = vec![Check::new(
        "shift_kernel",
        roos.kernel_matches_lim && roos.cokernel_vanishes,
        format!("depth {depth}: ker {} vs iterated pullback {}, coker {}", roos.kernel, roos.truncated_lim, roos.cokernel),
    )];
    if let LimResult::Group(g) = &l {
        checks.push(Check::new("lim_threads", g.verify_threads(depth + t.anchor()), "generator threads are compatible with the bonding maps"));
    }
    let mut result = json!({
        "lim": lim_json(&l),
        "lim1": {"vanishes": c.vanishes(), "certificate": c.summary()},
        "lim1_fg": {"vanishes": fg.class.vanishes(), "method": fg.method, "certificate": fg.class.summary()},
        "shift": roos,
    });
    if t.is_finitely_generated() {
        let r = lim_fg_check(&t, 2, depth, io.seed.unwrap_or(0))?;
        checks.push(Check::new("lim_fg_colimit", r.pass, format!("{} sampled subtowers", r.samples.len())));
        result["lim_fg_check"] = json!(r);
    }
    Ok(Outcome::new("tower", result, checks))
}

fn run_posetlim(io: &Io) -> Result<Outcome> {
    let j: PosetDiagramJson = read_input(io)?;
    let d = FinitePosetDiagram::try_from(j)?;
    let pmax = io.depth.unwrap_or(3);
    let lims = derived_limits(&d, pmax)?;
    let directed = d.poset().is_directed();
    let mut checks = Vec::new();
    if directed {
        let ok = lims.iter().skip(1).all(FgAbGroup::is_trivial);
        checks.push(Check::new("directed_vanishing", ok, format!("lim^p = 0 for 1 <= p <= {pmax} over a directed poset")));
    }
    Ok(Outcome::new("posetlim", json!({"directed": directed, "derived_limits": strings(&lims)}), checks))
}

fn run_nerve(io: &Io) -> Result<Outcome> {
    let j: CoverJson = read_input(io)?;
    let c = Cover::try_from(j)?;
    let n = match io.depth {
        Some(d) => nerve_skeleton(&c, d),
        None => nerve(&c)?,
    };
    let common = n.facets().iter().all(|s| c.carrier().iter().enumerate().any(|(p, _)| s.iter().all(|&e| c.elements()[e].members.contains(&p))));
    let top = n.dimension().max(0) as usize;
    let h: Vec<FgAbGroup> = (0..=top).map(|d| homology(&n, d)).collect();
    let labels: Vec<&str> = c.elements().iter().map(|e| e.label.as_str()).collect();
    let checks = vec![Check::new("facets_meet", common, "every nerve facet has a common carrier point")];
    let result = json!({"labels": labels, "nerve": n, "simplices": n.total_simplices(), "homology": strings(&h)});
    Ok(Outcome::new("nerve", result, checks))
}

fn run_bisystem(io: &Io) -> Result<Outcome> {
    let s: BiSystem = read_input(io)?;
    let w = io.window.unwrap_or(Window::new(4, 4));
    let squares = check_squares(&s, w);
    let mut checks = vec![Check::new("squares_commute", squares.is_ok(), squares.err().map_or("every square in the window commutes".into(), |e| e.to_string()))];
    let r = tau(&s, w)?;
    if let (Some(t), BiSystem::BiPeriodic { u, v, .. }) = (&r.thread, &s) {
        let image = match lim(&Tower::self_map(v)?) {
            LimResult::Group(g) => Some(Subgroup::image_of(&g.inclusion)),
            LimResult::ProNormalForm { .. } => None,
        };
        let ok = image.is_some_and(|i| t.verify(u, v, &i).unwrap_or(false));
        checks.push(Check::new("thread_certificate", ok, format!("periodic thread with step {}", t.step)));
    }
    if let Some(exact) = r.sequence_exact() {
        checks.push(Check::new("sequence_exact", exact, "0 -> p1 -> q1 -> colim lim -> lim colim -> 0"));
    }
    Ok(Outcome::new("bisystem", r.to_json(), checks))
}

fn homology_agrees(a: &SimplicialComplex, b: &SimplicialComplex, what: &str) -> Check {
    let top = a.dimension().max(b.dimension()).max(0) as usize;
    let ok = (0..=top).all(|n| homology(a, n).is_isomorphic(&homology(b, n)));
    Check::new("homotopy_invariance", ok, format!("homology agrees with {what} in degrees 0..={top}"))
}

fn run_cylinder(io: &Io) -> Result<Outcome> {
    let j: SimplicialMapJson = read_input(io)?;
    let f = SimplicialMap::try_from(j)?;
    let c = mapping_cylinder(&f);
    let checks = vec![homology_agrees(&c.complex, f.target(), "the target")];
    let top = c.complex.dimension().max(0) as usize;
    let result = json!({
        "cylinder": c.complex,
        "source_labels": c.source_inclusion.vertex_map().iter().map(|(a, b)| (*a, *b)).collect::<Vec<_>>(),
        "target_labels": c.target_inclusion.vertex_map().iter().map(|(a, b)| (*a, *b)).collect::<Vec<_>>(),
        "homology": strings(&(0..=top).map(|n| homology(&c.complex, n)).collect::<Vec<_>>()),
    });
    Ok(Outcome::new("cylinder", result, checks))
}

fn run_telescope(io: &Io) -> Result<Outcome> {
    let j: TelescopeJson = read_input(io)?;
    let t = j.build()?;
    let last = t.stages.last().expect("at least one stage").source().clone();
    let checks = vec![homology_agrees(&t.complex, &last, "the last stage")];
    let top = t.complex.dimension().max(0) as usize;
    let result = json!({
        "telescope": t.complex,
        "stages": t.stages.len(),
        "homology": strings(&(0..=top).map(|n| homology(&t.complex, n)).collect::<Vec<_>>()),
    });
    Ok(Outcome::new("telescope", result, checks))
}

fn run_pullback(io: &Io) -> Result<Outcome> {
    let j: PullbackCheckJson = read_input(io)?;
    let r = check_cochain_pullback(&j.k, &j.y, &j.z, &j.w, j.n)?;
    let checks = vec![Check::new("surjective", r.surjective, format!("H^{}(K, Z u W) = {} onto pullback {}", r.degree, r.source, r.pullback))];
    Ok(Outcome::new("pullback-check", json!(r), checks))
}

fn scenario_report(name: ScenarioName, a: &ScenarioArgs, io: &Io) -> Result<ScenarioReport> {
    let depth = io.depth.unwrap_or(4);
    Ok(match name {
        ScenarioName::Solenoid => scenarios::solenoid(a.p, depth)?.report(),
        ScenarioName::Telescope => scenarios::telescope(a.p, a.m)?.report(),
        ScenarioName::NestedFree => scenarios::nested_free(a.width)?.report(),
        ScenarioName::Alexandroff => scenarios::alexandroff(a.scales, a.columns)?.report(),
        ScenarioName::PPower => scenarios::p_power_bisystem(a.p, io.window.unwrap_or(Window::new(6, 6)))?.report(),
        ScenarioName::All => unreachable!("expanded by the caller"),
    })
}

fn combine(command: &str, reports: Vec<ScenarioReport>) -> Outcome {
    let mut checks = Vec::new();
    for r in &reports {
        for c in &r.checks {
            checks.push(Check::new(&format!("{}.{}", r.name, c.name), c.pass, c.detail.clone()));
        }
    }
    let result = if reports.len() == 1 { reports[0].to_json() } else { Value::Array(reports.iter().map(ScenarioReport::to_json).collect()) };
    Outcome::new(command, result, checks)
}

fn run_scenario(io: &Io, a: &ScenarioArgs) -> Result<Outcome> {
    let names = match a.name {
        ScenarioName::All => vec![ScenarioName::Solenoid, ScenarioName::Telescope, ScenarioName::NestedFree, ScenarioName::Alexandroff, ScenarioName::PPower],
        n => vec![n],
    };
    // Independent scenarios run on their own threads; results are written in order afterwards.
    let results: Vec<Result<ScenarioReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|&n| s.spawn(move || scenario_report(n, a, io))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|p| std::panic::resume_unwind(p)))
            .collect()
    });
    let reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(combine("scenario", reports))
}

/// `{"stages": [complex, ...], "maps": [[[v, w], ...], ...], "tail": "constant" | "repeat_last"}`,
/// with `maps[i]` sending stage `i+1` to stage `i`.
#[derive(Deserialize)]
struct ComplexTowerJson {
    stages: Vec<SimplicialComplex>,
    #[serde(default)]
    maps: Vec<Vec<(usize, usize)>>,
    #[serde(default)]
    tail: TailJson,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "snake_case")]
enum TailJson {
    #[default]
    Constant,
    RepeatLast,
}

fn complex_tower(j: ComplexTowerJson) -> Result<ComplexTower> {
    if j.stages.len() != j.maps.len() + 1 {
        return Err(Error::DimensionMismatch(format!("{} stages need {} maps", j.stages.len(), j.stages.len().saturating_sub(1))));
    }
    let maps = j
        .maps
        .into_iter()
        .enumerate()
        .map(|(i, vm)| SimplicialMap::new(j.stages[i + 1].clone(), j.stages[i].clone(), vm.into_iter().collect()))
        .collect::<Result<Vec<_>>>()?;
    let tail = match j.tail {
        TailJson::Constant => Tail::Constant,
        TailJson::RepeatLast => Tail::RepeatLast,
    };
    ComplexTower::new(j.stages, maps, tail)
}

fn run_verify(io: &Io, a: &VerifyArgs) -> Result<Outcome> {
    match a.target {
        VerifyTarget::Milnor => {
            let depth = io.depth.unwrap_or(3);
            let t = if io.input.is_some() {
                complex_tower(read_input(io)?)?
            } else {
                match a.tower {
                    BuiltinTower::Solenoid => scenarios::solenoid_tower(a.p, depth)?,
                    BuiltinTower::Circle => ComplexTower::constant(&SimplicialComplex::polygon(4), depth),
                }
            };
            let r = verify_milnor(&t, a.degree)?;
            Ok(combine("verify milnor", vec![r.report()]))
        }
        VerifyTarget::Corpus => Ok(corpus(io.seed.unwrap_or(0), a.count, io.depth.unwrap_or(5))),
    }
}

/// Tallies `count` seeded cases; the detail names the first failing seed.
fn tally(name: &str, seed: u64, count: usize, what: &str, mut case: impl FnMut(u64) -> Result<bool>) -> Check {
    let mut failed = None;
    for i in 0..count as u64 {
        if !case(seed.wrapping_add(i)).unwrap_or(false) {
            failed = Some(seed.wrapping_add(i));
            break;
        }
    }
    let detail = match failed {
        None => format!("{count} cases: {what}"),
        Some(s) => format!("seed {s} fails: {what}"),
    };
    Check::new(name, failed.is_none(), detail)
}

fn corpus(seed: u64, count: usize, depth: usize) -> Outcome {
    let depth = depth.clamp(2, 5);
    let checks = vec![
        tally("shift_kernel", seed, count, "ker(shift) = lim of the truncation and coker(shift) = 0", |s| {
            let r = roos_shift_check(&random_tower(s, depth, false), depth)?;
            Ok(r.kernel_matches_lim && r.cokernel_vanishes)
        }),
        tally("lim_fg_colimit", seed, count, "sampled finitely generated subtowers recover lim", |s| {
            Ok(lim_fg_check(&random_tower(s, depth, false), 2, depth, s)?.pass)
        }),
        tally("directed_vanishing", seed, count, "lim^p = 0 for 1 <= p <= 3 over directed posets", |s| {
            let d = random_diagram(s, 3 + (s % 4) as usize, true);
            Ok(derived_limits(&d, 3)?.iter().skip(1).all(FgAbGroup::is_trivial))
        }),
        tally("pullback_surjective", seed, count, "H^n(K, Z u W) maps onto the pullback, n <= 2", |s| {
            let (k, y, z, w) = random_pullback_data(s);
            for n in 0..=2 {
                if !check_cochain_pullback(&k, &y, &z, &w, n)?.surjective {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ];
    let result = json!({"seed": seed, "count": count, "depth": depth});
    Outcome::new("verify corpus", result, checks)
}
