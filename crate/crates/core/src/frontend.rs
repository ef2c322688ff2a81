//! Affine programs as matrix groups, and the JSON shapes shared with the
//! command-line tool.
//!
//! A single-location loop that nondeterministically applies one of the
//! updates `x := A x + b` reaches exactly the orbit of the start state under
//! the group generated by the homogenized matrices `[[A, b], [0, 1]]`.
//! Start states are kept symbolic: the invariant lives in the ring of the
//! current variables followed by one fresh variable per start value.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, QMatrix, Rational};
use crate::closure::{
    invariants_up_to_degree_with, matrix_from_strings, matrix_to_strings, ClosureConfig,
    ClosureResult, GeneratorSet,
};
use crate::error::{Error, Result};
use crate::polynomials::{poly_to_text, Ideal, IdealJson, MonomialOrder, Poly};
use crate::structure::JcDecomposition;

/// One guarded-free update `x := A x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Update {
    pub a: QMatrix,
    pub b: Vec<Rational>,
}

impl Update {
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.a
            .apply(x)
            .into_iter()
            .zip(&self.b)
            .map(|(v, c)| v + c)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineProgram {
    names: Vec<String>,
    updates: Vec<Update>,
}

impl AffineProgram {
    pub fn new(names: Vec<String>, updates: Vec<Update>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a program needs at least one variable".into()));
        }
        for (i, u) in updates.iter().enumerate() {
            if u.a.rows() != n || u.a.cols() != n || u.b.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "update {i} does not act on {n} variables"
                )));
            }
        }
        Ok(AffineProgram { names, updates })
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn updates(&self) -> &[Update] {
        &self.updates
    }

    /// Names of the invariant ring: the variables, then `<name>0` for each
    /// start value.
    pub fn invariant_names(&self) -> Vec<String> {
        let mut out = self.names.clone();
        out.extend(self.names.iter().map(|s| format!("{s}0")));
        out
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let js: ProgramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        js.to_program()
    }

    pub fn to_json(&self) -> ProgramJson {
        ProgramJson {
            variables: self.names.clone(),
            updates: self
                .updates
                .iter()
                .map(|u| UpdateJson {
                    matrix: matrix_to_strings(&u.a),
                    offset: u.b.iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }
}

/// `{"variables": ["x", "y"], "updates": [{"matrix": [["0","-1"],["1","0"]], "offset": ["0","0"]}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramJson {
    pub variables: Vec<String>,
    pub updates: Vec<UpdateJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateJson {
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub offset: Vec<String>,
}

impl ProgramJson {
    pub fn to_program(&self) -> Result<AffineProgram> {
        let n = self.variables.len();
        let updates = self
            .updates
            .iter()
            .map(|u| {
                let a = matrix_from_strings(&u.matrix)?;
                let b = if u.offset.is_empty() {
                    vec![Rational::zero(); n]
                } else {
                    u.offset.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?
                };
                Ok(Update { a, b })
            })
            .collect::<Result<Vec<_>>>()?;
        AffineProgram::new(self.variables.clone(), updates)
    }
}

/// `[[A, b], [0, 1]]`
pub fn homogenize(u: &Update) -> QMatrix {
    let n = u.b.len();
    let mut m = QMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, u.a.get(i, j).clone());
        }
        m.set(i, n, u.b[i].clone());
    }
    m.set(n, n, Rational::one());
    m
}

/// The homogenized updates as a generator set in dimension `n + 1`.
pub fn affine_to_generators(p: &AffineProgram) -> Result<GeneratorSet> {
    let mut gens = Vec::with_capacity(p.updates.len());
    for (index, u) in p.updates.iter().enumerate() {
        if u.a.det()?.is_zero() {
            return Err(Error::NonInvertibleUpdate { index });
        }
        gens.push(homogenize(u));
    }
    if gens.is_empty() {
        gens.push(QMatrix::identity(p.num_vars() + 1));
    }
    GeneratorSet::new(p.num_vars() + 1, gens)
}

/// Invariant ideal plus the closure run it came from.
#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub ideal: Ideal,
    pub names: Vec<String>,
    pub closure: ClosureResult,
}

pub fn strongest_invariant(p: &AffineProgram, d: u32) -> Result<InvariantResult> {
    strongest_invariant_with(p, d, &ClosureConfig::default())
}

/// Degree-`d` closure of the program's group, pulled back along
/// `x = M · (x0, 1)`: the result lives in the ring `[x, x0]` and holds
/// for every reachable state `x` from every start state `x0`.
pub fn strongest_invariant_with(p: &AffineProgram, d: u32, cfg: &ClosureConfig) -> Result<InvariantResult> {
    let g = affine_to_generators(p)?;
    let closure = invariants_up_to_degree_with(&g, d, cfg)?;
    let n = p.num_vars();
    let h = n + 1;
    let m = h * h + 1;
    let arity = m + 2 * n;
    let gb = closure.ideal.groebner_with(MonomialOrder::Grevlex, &cfg.gb)?;
    let mut gens: Vec<Poly> = gb.iter().map(|f| f.embed(arity, 0)).collect();
    for i in 0..n {
        // x_i − Σ_j M_ij x0_j − M_{i,n}
        let mut rhs = Poly::var(arity, i * h + n);
        for j in 0..n {
            rhs = &rhs + &(&Poly::var(arity, i * h + j) * &Poly::var(arity, m + n + j));
        }
        gens.push(&Poly::var(arity, m + i) - &rhs);
    }
    let ideal = Ideal::new(arity, gens).eliminate_with(m, &cfg.gb)?.reduced()?;
    Ok(InvariantResult {
        ideal,
        names: p.invariant_names(),
        closure,
    })
}

/// Runs `runs` random executions of length `≤ max_len` from random start
/// states and checks every invariant at every visited state.
pub fn check_invariant_soundness(
    p: &AffineProgram,
    invariant: &Ideal,
    runs: usize,
    max_len: usize,
    seed: u64,
) -> Result<()> {
    let n = p.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..runs {
        let start: Vec<Rational> = (0..n)
            .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into()))
            .collect();
        let mut x = start.clone();
        let len = rng.gen_range(0..=max_len);
        for step in 0..=len {
            let mut point = x.clone();
            point.extend(start.iter().cloned());
            if !invariant.vanishes_at(&point) {
                return Err(Error::Unsound(format!(
                    "invariant fails after {step} steps from {:?}",
                    start.iter().map(format_rational).collect::<Vec<_>>()
                )));
            }
            if step < len && !p.updates.is_empty() {
                let u = &p.updates[rng.gen_range(0..p.updates.len())];
                x = u.apply(&x);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub variables: Vec<String>,
    pub degree: u32,
    pub span_dimension: usize,
    pub invariants: Vec<String>,
    pub ideal: IdealJson,
}

impl InvariantReport {
    pub fn new(r: &InvariantResult) -> Self {
        InvariantReport {
            variables: r.names.clone(),
            degree: r.closure.degree_used,
            span_dimension: r.closure.span_dimension(),
            invariants: r
                .ideal
                .generators()
                .iter()
                .map(|g| poly_to_text(g, &r.names))
                .collect(),
            ideal: IdealJson::from_ideal(&r.ideal, &r.names),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "variables = {}\ndegree = {}\nspan dimension = {}\ninvariants:\n",
            self.variables.join(", "),
            self.degree,
            self.span_dimension
        );
        if self.invariants.is_empty() {
            out.push_str("  (none)\n");
        }
        for s in &self.invariants {
            out.push_str(&format!("  {s} = 0\n"));
        }
        out
    }
}

/// `{"semisimple": [[...]], "unipotent": [[...]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub semisimple: Vec<Vec<String>>,
    pub unipotent: Vec<Vec<String>>,
}

impl DecompositionJson {
    pub fn new(jc: &JcDecomposition) -> Self {
        DecompositionJson {
            semisimple: matrix_to_strings(&jc.semisimple),
            unipotent: matrix_to_strings(&jc.unipotent),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "semisimple = {}\nunipotent = {}\n",
            matrix_text(&self.semisimple),
            matrix_text(&self.unipotent)
        )
    }
}

/// `[[a, b], [c, d]]` with rational strings.
pub fn matrix_text(rows: &[Vec<String>]) -> String {
    let inner: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

/// Reads a JSON list of matrices (`[[["1","1"],["0","1"]], …]`).
pub fn matrices_from_json(s: &str) -> Result<Vec<QMatrix>> {
    let raw: Vec<Vec<Vec<String>>> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    raw.iter().map(|m| matrix_from_strings(m)).collect()
}

/// Reads one matrix (`[["2","1"],["0","2"]]`).
pub fn matrix_from_json(s: &str) -> Result<QMatrix> {
    let raw: Vec<Vec<String>> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_strings(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::closure::{check_soundness, finite_group_elements};
    use crate::polynomials::parse_poly;

    fn prog(js: &str) -> AffineProgram {
        AffineProgram::from_json(js).unwrap()
    }

    #[test]
    fn homogenization_examples() {
        let p = prog(r#"{"variables": ["x"], "updates": [{"matrix": [["1"]], "offset": ["1"]}]}"#);
        let g = affine_to_generators(&p).unwrap();
        assert_eq!(g.gens()[0], QMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        let p = prog(r#"{"variables": ["x"], "updates": [{"matrix": [["2"]]}]}"#);
        assert_eq!(affine_to_generators(&p).unwrap().gens()[0], QMatrix::from_i64(&[&[2, 0], &[0, 1]]));
        let p = prog(
            r#"{"variables": ["x"], "updates": [{"matrix": [["1"]]}, {"matrix": [["0"]], "offset": ["3"]}]}"#,
        );
        assert!(matches!(affine_to_generators(&p), Err(Error::NonInvertibleUpdate { index: 1 })));
    }

    #[test]
    fn homogenized_action_matches() {
        let u = Update {
            a: QMatrix::from_i64(&[&[1, 2], &[3, 5]]),
            b: vec![rat(1, 2), int(-4)],
        };
        let x = vec![rat(3, 7), int(2)];
        let mut xh = x.clone();
        xh.push(int(1));
        let mut expected = u.apply(&x);
        expected.push(int(1));
        assert_eq!(homogenize(&u).apply(&xh), expected);
    }

    #[test]
    fn identity_program() {
        let p = prog(r#"{"variables": ["x"], "updates": [{"matrix": [["1"]]}]}"#);
        let r = strongest_invariant(&p, 1).unwrap();
        let nm = p.invariant_names();
        let expected = Ideal::new(2, vec![parse_poly("x - x0", &nm).unwrap()]);
        assert!(r.ideal.equals(&expected).unwrap());
    }

    #[test]
    fn doubling_program() {
        // ⟨2⟩ is Zariski dense in the multiplicative group, so nothing ties
        // x to x0 beyond what holds for every scaling
        let p = prog(r#"{"variables": ["x"], "updates": [{"matrix": [["2"]]}, {"matrix": [["1/2"]]}]}"#);
        let r = strongest_invariant(&p, 2).unwrap();
        assert!(r.ideal.is_zero());
        let c = &r.closure;
        let nm = crate::polynomials::gl_variable_names(2);
        for f in ["x12", "x21", "x22 - 1", "x11*y - 1"] {
            assert!(c.ideal.contains(&parse_poly(f, &nm).unwrap()).unwrap(), "{f}");
        }
        // a translation program keeps the difference x - x0 an integer,
        // which no polynomial sees either
        let p = prog(r#"{"variables": ["x"], "updates": [{"matrix": [["1"]], "offset": ["1"]}]}"#);
        assert!(strongest_invariant(&p, 2).unwrap().ideal.is_zero());
    }

    #[test]
    fn rotation_program() {
        let p = prog(r#"{"variables": ["x", "y"], "updates": [{"matrix": [["0","-1"],["1","0"]]}]}"#);
        let r = strongest_invariant(&p, 2).unwrap();
        let nm = p.invariant_names();
        let circle = parse_poly("x^2 + y^2 - x0^2 - y0^2", &nm).unwrap();
        assert!(r.ideal.contains(&circle).unwrap());
        check_invariant_soundness(&p, &r.ideal, 200, 15, 3).unwrap();
        // orbit oracle: each of the four group elements maps a start state
        // to a point of the invariant variety
        let g = affine_to_generators(&p).unwrap();
        let elems = finite_group_elements(g.gens(), 3, 24).unwrap();
        assert_eq!(elems.len(), 4);
        check_soundness(&r.closure.ideal, &g, 100, 12, 1).unwrap();
        let start = [rat(3, 2), int(-5), int(1)];
        for e in elems {
            let x = e.apply(&start);
            let pt = [x[0].clone(), x[1].clone(), start[0].clone(), start[1].clone()];
            assert!(r.ideal.vanishes_at(&pt));
        }
    }

    #[test]
    fn program_json_round_trip() {
        let p = prog(r#"{"variables": ["x", "y"], "updates": [{"matrix": [["0","-1"],["1","0"]], "offset": ["1/2","0"]}]}"#);
        let js = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(AffineProgram::from_json(&js).unwrap(), p);
        assert!(AffineProgram::from_json(r#"{"variables": ["x"], "updates": [{"matrix": [["1","2"]]}]}"#).is_err());
        assert!(AffineProgram::from_json("not json").is_err());
    }

    #[test]
    fn decomposition_json() {
        let jc = crate::structure::jordan_chevalley(&QMatrix::from_i64(&[&[2, 1], &[0, 2]])).unwrap();
        let js = DecompositionJson::new(&jc);
        assert_eq!(js.semisimple, vec![vec!["2", "0"], vec!["0", "2"]]);
        assert_eq!(js.unipotent, vec![vec!["1", "1/2"], vec!["0", "1"]]);
        assert_eq!(matrix_from_json(r#"[["2","1"],["0","2"]]"#).unwrap(), QMatrix::from_i64(&[&[2, 1], &[0, 2]]));
        assert_eq!(matrices_from_json(r#"[[["1"]], [["2"]]]"#).unwrap().len(), 2);
    }
}
