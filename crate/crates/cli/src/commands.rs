use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use spcodes_core::charsum::{self, KloostermanTable};
use spcodes_core::codes::{self, CodeSpec};
use spcodes_core::moments::{self, WeightsRoute};
use spcodes_core::symp::{self, GroupTable, Which, MAX_SP2_Q, MAX_SP4_Q};
use spcodes_core::{gf, FieldCtx};

use crate::cache;
use crate::error::CliError;
use crate::report::{big, eisenstein, weights, Report};

/// Trace tables and element listings are printed up to this field size.
const LIST_Q: u64 = 27;
/// Delta-identity sums cost `q²` per `(m, β)` sweep.
const DELTA_IDENTITY_MAX_Q: u64 = 729;
const DELTA_IDENTITY_MAX_M: u32 = 4;
const KGL_MAX_T: u32 = 4;
/// Exhaustive `GL(t,q)` sums run when `q^(t²)` is at most this.
const KGL_EXHAUSTIVE_MAX: u64 = 10_000;
/// Full MacWilliams totals are streamed up to this code length.
const MACWILLIAMS_TOTAL_MAX_N: u64 = 100_000;
const CLOSURE_PAIRS: usize = 1000;

/// Field and shared state for one invocation.
pub struct Session {
    pub ctx: FieldCtx,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    /// Messages for stderr that must not enter the report.
    pub log: Vec<String>,
    sp2: Option<GroupTable>,
    sp4: Option<GroupTable>,
}

impl Session {
    pub fn new(r: u32, modulus: Option<&str>, seed: u64, cache_dir: Option<PathBuf>) -> Result<Self, CliError> {
        let m = modulus.map(gf::parse_coeff_list).transpose()?;
        let ctx = FieldCtx::new(r as usize, m.as_deref())?;
        Ok(Session {
            ctx,
            seed,
            cache_dir,
            log: Vec::new(),
            sp2: None,
            sp4: None,
        })
    }

    pub fn enumerable(&self, which: Which) -> bool {
        match which {
            Which::Sp2 => self.ctx.q() <= MAX_SP2_Q,
            Which::Sp4 => self.ctx.q() <= MAX_SP4_Q,
        }
    }

    /// The enumerated group, computed once per session.
    fn table(&mut self, which: Which) -> Result<&GroupTable, CliError> {
        let slot_empty = match which {
            Which::Sp2 => self.sp2.is_none(),
            Which::Sp4 => self.sp4.is_none(),
        };
        if slot_empty {
            let t = match (which, &self.cache_dir) {
                (Which::Sp4, Some(dir)) => {
                    let (t, src) = cache::load_or_build(&self.ctx, dir)?;
                    let path = dir.join(cache::FILE_NAME);
                    self.log.push(match src {
                        cache::Source::Loaded => format!("loaded Sp(4,3) from {}", path.display()),
                        cache::Source::Computed => format!("wrote Sp(4,3) cache {}", path.display()),
                        cache::Source::Rebuilt => format!("cache {} was invalid, rebuilt", path.display()),
                    });
                    t
                }
                _ => symp::enumerate(&self.ctx, which)?,
            };
            match which {
                Which::Sp2 => self.sp2 = Some(t),
                Which::Sp4 => self.sp4 = Some(t),
            }
        }
        Ok(match which {
            Which::Sp2 => self.sp2.as_ref(),
            Which::Sp4 => self.sp4.as_ref(),
        }
        .expect("filled above"))
    }
}

fn elem(ctx: &FieldCtx, a: spcodes_core::FieldElement) -> Value {
    json!({ "index": a.index(), "coeffs": ctx.coeff_string(&a) })
}

pub fn field(s: &mut Session) -> Result<Report, CliError> {
    let ctx = &s.ctx;
    let mut rep = Report::new();
    rep.set("r", ctx.r());
    rep.set("q", ctx.q());
    rep.set("modulus", ctx.modulus_string());

    let mut squares: Vec<usize> = ctx.units().map(|b| ctx.mul(b, b).index()).collect();
    squares.sort_unstable();
    squares.dedup();
    let mut trace_counts = [0u64; 3];
    for x in ctx.elements() {
        trace_counts[ctx.trace(x) as usize] += 1;
    }
    rep.set("square_count", squares.len());
    rep.set("trace_counts", trace_counts.to_vec());

    if ctx.q() <= LIST_Q {
        let rows: Vec<Value> = ctx
            .elements()
            .map(|x| {
                json!({
                    "index": x.index(),
                    "coeffs": ctx.coeff_string(&x),
                    "trace": ctx.trace(x),
                    "square": ctx.is_square(x),
                })
            })
            .collect();
        rep.set("elements", rows);
    }

    let square_ok = squares.len() as u64 == (ctx.q() - 1) / 2
        && ctx.units().all(|x| ctx.is_square(x) == squares.binary_search(&x.index()).is_ok());
    rep.check("square_classes", square_ok);
    rep.check("trace_balanced", trace_counts.iter().all(|&c| c == ctx.q() / 3));
    rep.check(
        "trace_frobenius",
        ctx.elements().all(|x| ctx.trace(ctx.pow(x, 3)) == ctx.trace(x)),
    );
    Ok(rep)
}

pub fn kloosterman(s: &mut Session, hmax: u32) -> Result<Report, CliError> {
    let ctx = &s.ctx;
    let q = ctx.q();
    let mut rep = Report::new();
    rep.set("q", q);

    let mut rows = Vec::new();
    let mut integral = true;
    let mut weil = true;
    for a in ctx.units() {
        match charsum::kloosterman_counts(ctx, a) {
            Ok(c) => {
                let k = BigInt::from(c.n0) - BigInt::from(c.n1);
                integral &= c.n1 == c.n2;
                weil &= charsum::within_weil_bound(ctx, &k);
                if q <= LIST_Q {
                    rows.push(json!({
                        "a": elem(ctx, a),
                        "k": big(&k),
                        "n0": c.n0, "n1": c.n1, "n2": c.n2,
                    }));
                }
            }
            Err(e @ spcodes_core::Error::Invariant { .. }) => {
                integral = false;
                rep.notice(e.to_string());
            }
            Err(e) => return Err(e.into()),
        }
    }
    if q <= LIST_Q {
        rep.set("table", rows);
    }
    rep.check("integrality", integral);
    rep.check("weil_bound", weil);

    let Some(kt) = rep.verify("table_build", KloostermanTable::new(ctx))? else {
        return Ok(rep);
    };
    rep.check("weight_divisibility", codes::weight_formula_divisible(ctx, &kt));

    let mut moments = Vec::new();
    let mut sk_ok = true;
    for h in 0..=hmax {
        let mk = charsum::mk(ctx, h)?;
        match charsum::sk_with_table(ctx, &kt, h) {
            Ok(sk) => moments.push(json!({ "h": h, "mk": big(&mk), "sk": big(&sk) })),
            Err(e @ spcodes_core::Error::Invariant { .. }) => {
                sk_ok = false;
                rep.notice(e.to_string());
            }
            Err(e) => return Err(e.into()),
        }
    }
    rep.set("moments", moments);
    rep.check("sk_two_routes", sk_ok);

    if q <= DELTA_IDENTITY_MAX_Q {
        let mut delta_identity = Vec::new();
        let mut all = true;
        for m in 0..=DELTA_IDENTITY_MAX_M {
            let deltas = charsum::delta_distribution(ctx, m)?;
            let mut ok = true;
            for beta in ctx.elements() {
                match charsum::check_delta_identity_with(ctx, &kt, &deltas, m, beta) {
                    Ok(b) => ok &= b,
                    Err(e @ spcodes_core::Error::Invariant { .. }) => {
                        ok = false;
                        rep.notice(e.to_string());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            all &= ok;
            delta_identity.push(json!({ "m": m, "delta_at_zero": big(&deltas[0]), "holds": ok }));
        }
        rep.set("delta_identity", delta_identity);
        rep.check("delta_identity", all);

        let d2 = charsum::delta_distribution(ctx, 2)?;
        let mut brute_ok = true;
        for beta in ctx.elements() {
            brute_ok &= charsum::delta2_brute(ctx, beta)? == d2[beta.index()];
        }
        rep.check("delta2_brute", brute_ok);
    } else {
        rep.notice(format!("delta identity sweep skipped for q > {DELTA_IDENTITY_MAX_Q}"));
    }

    let mut kgl_rows = Vec::new();
    let mut closed_ok = true;
    let mut exhaustive_ok = true;
    for t in 0..=KGL_MAX_T {
        let exhaustive_feasible = q.checked_pow(t * t).is_some_and(|n| n <= KGL_EXHAUSTIVE_MAX);
        for a in ctx.units() {
            let rec = charsum::kgl_recursive(ctx, t, a)?;
            let closed = if t >= 1 {
                let c = charsum::kgl_closed(ctx, t, a)?;
                closed_ok &= c == rec;
                Some(c)
            } else {
                None
            };
            let exh = if exhaustive_feasible {
                let e = charsum::kgl_exhaustive(ctx, t, a)?;
                exhaustive_ok &= e == rec;
                Some(e)
            } else {
                None
            };
            if a == ctx.one() {
                kgl_rows.push(json!({
                    "t": t,
                    "recursive": big(&rec),
                    "closed": closed.map(big),
                    "exhaustive": exh.map(big),
                }));
            }
        }
    }
    rep.set("kgl_at_one", kgl_rows);
    rep.check("kgl_closed_vs_recursive", closed_ok);
    rep.check("kgl_exhaustive", exhaustive_ok);
    Ok(rep)
}

pub fn group(s: &mut Session, which: Which) -> Result<Report, CliError> {
    let mut rep = Report::new();
    let n = which.half_rank();
    let q = s.ctx.q();
    rep.set("group", which.name());
    rep.set("q", q);
    let order = symp::order_sp(n, q);
    rep.set("order_closed", big(&order));

    let closed = rep.verify("closed_distribution", symp::trace_dist_closed(&s.ctx, which))?;

    let table = if s.enumerable(which) {
        match s.table(which) {
            Ok(t) => {
                let t = t.clone();
                rep.check("enumeration", true);
                Some(t)
            }
            Err(CliError::Core(e @ spcodes_core::Error::Invariant { .. })) => {
                rep.verify::<()>("enumeration", Err(e))?;
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        rep.unsupported = true;
        rep.notice(format!(
            "{} over GF({q}) is not enumerated; closed-form counts only",
            which.name()
        ));
        None
    };
    let ctx = &s.ctx;

    if let Some(t) = &table {
        rep.set("order", t.order());
        rep.check("order", BigUint::from(t.order()) == order);
        rep.check("trace_surjective", t.is_trace_surjective());
    }
    if let Some(cl) = &closed {
        let hist: Vec<Value> = ctx
            .elements()
            .map(|b| {
                let mut o = json!({ "beta": elem(ctx, b), "closed": big(&cl[b.index()]) });
                if let Some(t) = &table {
                    o["enumerated"] = json!(t.trace_hist()[b.index()]);
                }
                o
            })
            .collect();
        rep.set("trace_histogram", hist);
        if let Some(t) = &table {
            let same = ctx
                .elements()
                .all(|b| BigUint::from(t.trace_hist()[b.index()]) == cl[b.index()]);
            rep.check("histogram_closed_form", same);
        }
        rep.check("closed_attains_every_trace", cl.iter().all(|c| *c > BigUint::ZERO));
    }

    let kt = KloostermanTable::new(ctx)?;
    let dist: Option<Vec<BigUint>> = match &table {
        Some(t) => Some(t.trace_hist().iter().map(|&c| BigUint::from(c)).collect()),
        None => closed.clone(),
    };
    if let Some(dist) = &dist {
        let mut rows = Vec::new();
        let mut ok = true;
        for a in ctx.units() {
            let value = symp::gauss_sum_from_distribution(ctx, dist, a);
            let expected = symp::gauss_sum_expected(ctx, which, &kt, a)?;
            ok &= value.to_integer().as_ref() == Some(&expected);
            rows.push(json!({ "a": elem(ctx, a), "value": eisenstein(&value), "expected": big(&expected) }));
        }
        rep.set("gauss_sums", rows);
        rep.check("gauss_sums", ok);
    }
    if let Some(t) = &table {
        match symp::check_trace_counting(ctx, t) {
            Ok(ok) => rep.check("trace_counting", ok),
            Err(e) => {
                rep.verify::<()>("trace_counting", Err(e))?;
            }
        }
        let order = t.order() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let pairs: Vec<(usize, usize)> = (0..CLOSURE_PAIRS)
            .map(|_| (rng.gen_range(0..order), rng.gen_range(0..order)))
            .collect();
        rep.check("closure_spot_check", symp::closure_spot_check(ctx, t, pairs)?);
    }

    if let Some(b) = rep.verify("bruhat_counts", symp::bruhat_counts(n, q))? {
        let rows: Vec<Value> = b
            .rows
            .iter()
            .map(|row| {
                json!({
                    "r": row.r,
                    "stabilizer": big(&row.stabilizer),
                    "cosets": big(&row.cosets),
                    "double_coset": big(&row.double_coset),
                })
            })
            .collect();
        rep.set(
            "bruhat",
            json!({
                "gl_order": big(&b.gl_order),
                "parabolic": big(&b.parabolic),
                "rows": rows,
                "total": big(&b.total),
            }),
        );
        rep.check("bruhat_total", b.total == order);
    }
    let mut alt = Vec::new();
    let mut alt_ok = true;
    for r in 0..=n {
        let closed = symp::alt_count(r, q);
        let exh = match symp::alt_count_exhaustive(ctx, r as usize) {
            Ok(c) => {
                alt_ok &= BigUint::from(c) == closed;
                Some(c)
            }
            Err(spcodes_core::Error::UnsupportedScale(_)) => None,
            Err(e) => return Err(e.into()),
        };
        alt.push(json!({ "r": r, "closed": big(&closed), "exhaustive": exh }));
    }
    rep.set("alternating_counts", alt);
    rep.check("alternating_counts", alt_ok);

    if let Some(g) = rep.verify("bruhat_gauss_sum", symp::gauss_sum_bruhat(ctx, n))? {
        let expected = symp::gauss_sum_expected(ctx, which, &kt, ctx.one())?;
        rep.set("bruhat_gauss_sum", big(&g));
        rep.check("bruhat_gauss_sum_matches", g == expected);
    }
    Ok(rep)
}

pub fn code(s: &mut Session, which: Which, jmax: u64, hmax: u32) -> Result<Report, CliError> {
    let mut rep = Report::new();
    rep.set("group", which.name());
    let spec = if s.enumerable(which) {
        let t = s.table(which)?.clone();
        CodeSpec::from_table(&s.ctx, &t)?
    } else {
        rep.notice(format!(
            "{} is not enumerated at q = {}; coordinate-level checks skipped",
            which.name(),
            s.ctx.q()
        ));
        CodeSpec::closed(&s.ctx, which)?
    };
    let n = spec.length();
    rep.set("length", n);
    rep.set("dual_dimension", codes::dual_dimension(spec.ctx()));

    let dual = codes::dual_weight_distribution(&spec);
    rep.set("dual_distribution", weights(&dual));
    if spec.trace_vector().is_some() {
        rep.check("dual_injective", codes::check_injective(&spec)?);
    }
    if let Some((ok, rows)) = rep.verify("weight_formula_integral", codes::weight_formula_check(&spec))? {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| json!({ "a": elem(spec.ctx(), r.a), "direct": r.direct, "formula": r.formula }))
            .collect();
        rep.set("weight_formula", rows);
        rep.check("weight_formula", ok);
    }

    let need = jmax.max(hmax as u64);
    let small = codes::small_weight_counts(&spec, need)?;
    let small_j = small.truncated(jmax);
    let mw = codes::macwilliams_truncated(&dual, n, jmax)?;
    let mut routes = serde_json::Map::new();
    routes.insert("small_weight".into(), weights(&small_j));
    routes.insert("macwilliams".into(), weights(&mw));
    rep.check("weights_macwilliams", mw == small_j);
    if spec.trace_vector().is_some() {
        match codes::brute_force_counts(&spec, jmax) {
            Ok(b) => {
                rep.check("weights_brute_force", b == small_j);
                routes.insert("brute_force".into(), weights(&b));
            }
            Err(spcodes_core::Error::UnsupportedScale(msg)) => rep.notice(format!("brute-force weights skipped: {msg}")),
            Err(e) => return Err(e.into()),
        }
    }
    rep.set("low_weights", Value::Object(routes));
    rep.check("c0_is_one", small.count(0) == BigUint::from(1u32));

    if n <= MACWILLIAMS_TOTAL_MAX_N {
        let total = codes::macwilliams_total(&dual, n)?;
        let expected = BigUint::from(3u32).pow((n - codes::dual_dimension(spec.ctx())) as u32);
        rep.set("code_size_digits", total.to_string().len());
        rep.check("macwilliams_total", total == expected);
    } else {
        rep.notice(format!("MacWilliams total skipped for length {n} > {MACWILLIAMS_TOTAL_MAX_N}"));
    }

    let k = codes::dual_dimension(spec.ctx());
    let mut pless = Vec::new();
    let mut ok = true;
    for h in 0..=hmax {
        let c = codes::pless_check_with(&dual, &small, k, h);
        ok &= c.holds();
        pless.push(json!({ "h": h, "lhs": big(&c.lhs), "rhs": big(&c.rhs), "holds": c.holds() }));
    }
    rep.set("pless", pless);
    rep.check("pless", ok);
    Ok(rep)
}

pub fn moments(s: &mut Session, hmax: u32, route: WeightsRoute) -> Result<Report, CliError> {
    let ctx = &s.ctx;
    let mut rep = Report::new();
    rep.set("q", ctx.q());
    rep.set("weights_route", route.name());
    rep.set("seed_sk0", big(moments::sk_seed(ctx)));
    let Some(m) = rep.verify("recursions_integral", moments::moment_report(ctx, hmax, route))? else {
        return Ok(rep);
    };
    let rows: Vec<Value> = m
        .brute
        .entries
        .iter()
        .map(|(h, v)| {
            json!({
                "h": h,
                "brute_force": big(v),
                "recursive_sp2": m.sp2.get(*h).map(big),
                "recursive_sp4_even": m.sp4_even.get(*h).map(big),
            })
        })
        .collect();
    rep.set("moments", rows);
    let agree = |t: &moments::MomentTable| t.entries.iter().all(|(h, v)| m.brute.get(*h) == Some(v));
    rep.check("recursion_sp2", agree(&m.sp2));
    rep.check("recursion_sp4_even", agree(&m.sp4_even));
    Ok(rep)
}

pub fn verify_all(s: &mut Session) -> Result<Report, CliError> {
    let mut rep = Report::new();
    suite(&mut rep, "field", field(s))?;
    suite(&mut rep, "kloosterman", kloosterman(s, moments::MAX_HMAX))?;
    for which in [Which::Sp2, Which::Sp4] {
        let g = group(s, which).map(|mut g| {
            // auto-skip is expected here, not an unsupported request
            g.unsupported = false;
            g
        });
        suite(&mut rep, &format!("group_{}", which.name()), g)?;
    }
    for which in [Which::Sp2, Which::Sp4] {
        suite(&mut rep, &format!("code_{}", which.name()), code(s, which, 6, 6))?;
    }
    suite(&mut rep, "moments", moments(s, moments::MAX_HMAX, WeightsRoute::SmallWeight))?;
    Ok(rep)
}

/// Nests a suite's report, or records a notice when it is beyond the supported scale.
fn suite(rep: &mut Report, key: &str, res: Result<Report, CliError>) -> Result<(), CliError> {
    match res {
        Ok(sub) => rep.absorb(key, sub),
        Err(CliError::Core(spcodes_core::Error::UnsupportedScale(msg))) => {
            rep.notice(format!("{key}: skipped, {msg}"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}
