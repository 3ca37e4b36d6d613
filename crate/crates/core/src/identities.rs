//! Closed-form Thue-Morse products, as data, with a numerical verifier.

use serde::{Deserialize, Serialize};

use crate::error::{check_eps, domain, Result};
use crate::product::{check_convergence, eval_product, EvalConfig, RationalProductSpec};
use crate::value::ValueWithError;

/// `coeff * 2^{sqrt2_exp / 2}`; every known target has this shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub coeff: f64,
    pub sqrt2_exp: i32,
}

impl ClosedForm {
    pub fn new(coeff: f64, sqrt2_exp: i32) -> Self {
        Self { coeff, sqrt2_exp }
    }

    pub fn rational(coeff: f64) -> Self {
        Self::new(coeff, 0)
    }

    pub fn value(&self) -> f64 {
        let whole = 2f64.powi(self.sqrt2_exp.div_euclid(2));
        let half = if self.sqrt2_exp.rem_euclid(2) == 1 { std::f64::consts::SQRT_2 } else { 1.0 };
        self.coeff * whole * half
    }

    pub fn times(&self, other: &ClosedForm) -> ClosedForm {
        Self::new(self.coeff * other.coeff, self.sqrt2_exp + other.sqrt2_exp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub spec: RationalProductSpec,
    pub target: ClosedForm,
    pub citation: String,
}

impl Identity {
    fn new(
        name: &str,
        start: u64,
        num: Vec<f64>,
        den: Vec<f64>,
        target: ClosedForm,
        citation: &str,
    ) -> Self {
        Self {
            name: name.to_string(),
            spec: RationalProductSpec::new(start, num, den),
            target,
            citation: citation.to_string(),
        }
    }
}

/// The known closed forms.
pub fn builtin_catalog() -> Vec<Identity> {
    let wr = Identity::new(
        "woods-robbins",
        0,
        vec![0.5],
        vec![1.0],
        ClosedForm::new(1.0, -1),
        "Woods-Robbins: prod_{n>=0} ((2n+1)/(2n+2))^{u_n} = 1/sqrt2",
    );
    let quarter = Identity::new(
        "four-n-plus-three",
        0,
        vec![0.75],
        vec![0.25],
        ClosedForm::rational(2.0),
        "h(1/2) = 3/2 from the functional equation at x = 0: prod_{n>=0} ((4n+3)/(4n+1))^{u_n} = 2",
    );
    let combined = combine("four-n-plus-three-times-woods-robbins", &quarter, &wr)
        .expect("both start at n = 0");
    vec![
        wr,
        Identity::new(
            "f-half-one",
            1,
            vec![0.5],
            vec![1.0],
            ClosedForm::new(1.0, 1),
            "f(1/2, 1) = sqrt2",
        ),
        Identity::new(
            "f-quarter-three-quarters",
            1,
            vec![0.25],
            vec![0.75],
            ClosedForm::rational(1.5),
            "f(1/4, 3/4) = 3/2",
        ),
        quarter,
        Identity::new(
            "fe-at-minus-half",
            1,
            vec![-0.25, 0.5],
            vec![0.25, -0.5],
            ClosedForm::rational(0.5),
            "functional equation at x = -1/2: prod_{n>=1} ((4n-1)(2n+1)/((4n+1)(2n-1)))^{u_n} = 1/2",
        ),
        Identity::new(
            "fe-at-one",
            0,
            vec![0.75, 1.0],
            vec![1.25, 1.5],
            ClosedForm::new(1.0, -1),
            "h(3/2) h(2) = 5 sqrt2 / 4: prod_{n>=0} ((4n+3)(2n+2)/((4n+5)(2n+3)))^{u_n} = 1/sqrt2",
        ),
        Identity::new(
            "fe-at-three-halves",
            0,
            vec![1.0, 1.0],
            vec![1.5, 2.0],
            ClosedForm::new(1.0, -1),
            "h(2)^2 h(3) = 3/sqrt2: prod_{n>=0} ((2n+2)(n+1)/((2n+3)(n+2)))^{u_n} = 1/sqrt2",
        ),
        combined,
    ]
}

pub fn find_identity(name: &str) -> Option<Identity> {
    builtin_catalog().into_iter().find(|id| id.name == name)
}

/// The catalog as pretty-printed JSON.
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&builtin_catalog()).expect("catalog serializes")
}

/// Product of two identities with the same start index.
pub fn combine(name: &str, a: &Identity, b: &Identity) -> Result<Identity> {
    if a.spec.start_index != b.spec.start_index {
        return Err(domain(format!(
            "cannot combine products starting at {} and {}",
            a.spec.start_index, b.spec.start_index
        )));
    }
    let cat = |x: &[f64], y: &[f64]| x.iter().chain(y).copied().collect::<Vec<_>>();
    Ok(Identity {
        name: name.to_string(),
        spec: RationalProductSpec::new(
            a.spec.start_index,
            cat(&a.spec.numerator_shifts, &b.spec.numerator_shifts),
            cat(&a.spec.denominator_shifts, &b.spec.denominator_shifts),
        ),
        target: a.target.times(&b.target),
        citation: format!("{} times {}", a.name, b.name),
    })
}

fn check_parameter(name: &str, v: f64, lowest_pole: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(domain(format!("{name} = {v} is not finite")));
    }
    if v.fract() == 0.0 && v <= lowest_pole {
        return Err(domain(format!("{name} = {v} hits a zero or pole of the product")));
    }
    Ok(())
}

fn split_shifts(b: f64, c: f64) -> (Vec<f64>, Vec<f64>) {
    (vec![b, (b + 1.0) / 2.0, c / 2.0], vec![c, (c + 1.0) / 2.0, b / 2.0])
}

/// `prod_{n>=1} ((n+b)(n+(b+1)/2)(n+c/2) / ((n+c)(n+(c+1)/2)(n+b/2)))^{u_n} = (c+1)/(b+1)`,
/// obtained by splitting `f(b, c)` into its even and odd halves.
pub fn split_identity(b: f64, c: f64) -> Result<Identity> {
    check_parameter("b", b, -1.0)?;
    check_parameter("c", c, -1.0)?;
    let target = (c + 1.0) / (b + 1.0);
    if target <= 0.0 {
        return Err(domain(format!("target (c+1)/(b+1) = {target} is not positive")));
    }
    let (num, den) = split_shifts(b, c);
    let id = Identity {
        name: format!("split({b}, {c})"),
        spec: RationalProductSpec::new(1, num, den),
        target: ClosedForm::rational(target),
        citation: "f(b,c) = ((c+1)/(b+1)) f(b/2, c/2) f((c+1)/2, (b+1)/2)".into(),
    };
    check_convergence(&id.spec)?;
    Ok(id)
}

/// The same six factors taken from `n = 0`; the `n = 0` factor cancels the
/// target, leaving `1`.
pub fn split_identity_from_zero(b: f64, c: f64) -> Result<Identity> {
    check_parameter("b", b, 0.0)?;
    check_parameter("c", c, 0.0)?;
    let (num, den) = split_shifts(b, c);
    let id = Identity {
        name: format!("split-from-zero({b}, {c})"),
        spec: RationalProductSpec::new(0, num, den),
        target: ClosedForm::rational(1.0),
        citation: "split identity including the n = 0 factor".into(),
    };
    check_convergence(&id.spec)?;
    Ok(id)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub computed: Option<ValueWithError>,
    pub target_value: f64,
    pub deviation: f64,
    pub pass: bool,
    pub reason: Option<String>,
}

/// Passes when `|computed - target| <= computed.abs_error + eps`.
pub fn verify_identity(id: &Identity, eps: f64) -> IdentityReport {
    let target_value = id.target.value();
    let failed = |reason: String| IdentityReport {
        name: id.name.clone(),
        computed: None,
        target_value,
        deviation: f64::INFINITY,
        pass: false,
        reason: Some(reason),
    };
    if let Err(e) = check_eps(eps) {
        return failed(e.to_string());
    }
    let cfg = EvalConfig::with_eps(eps / 4.0);
    match eval_product(&id.spec, &cfg) {
        Ok(v) => {
            let deviation = (v.value - target_value).abs();
            let pass = deviation <= v.abs_error + eps;
            IdentityReport {
                name: id.name.clone(),
                computed: Some(v),
                target_value,
                deviation,
                pass,
                reason: (!pass).then(|| "deviation exceeds error bound plus tolerance".into()),
            }
        }
        Err(e) => failed(e.to_string()),
    }
}
