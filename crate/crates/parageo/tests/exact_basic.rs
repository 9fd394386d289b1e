use parageo::exact::{parse_scalar, rat, ratq, ParamEnv, ParamSet, Scalar};

#[test]
fn phc9_curvature_expression_roundtrip() {
    let ps = ParamSet::new(["a", "b", "c", "t"]);
    // 1/2 (2c^2 - 3c - 2ac + 2a + 1) built two ways
    let s1 = parse_scalar("1/2*(2*c*c - 3*c - 2*a*c + 2*a + 1)", &ps).unwrap();
    let s2 = parse_scalar("(2*c*c - 3*c - 2*a*c + 2*a + 1)/2", &ps).unwrap();
    assert_eq!(s1, s2);
    let env = ParamEnv::new().bind("c", rat(-2)).bind("a", rat(0));
    assert_eq!(s1.substitute(&env).unwrap().as_rational().unwrap(), ratq(15, 2));
    // round trip
    let printed = s1.to_string();
    assert_eq!(parse_scalar(&printed, &ps).unwrap(), s1);
}

#[test]
fn canonical_form_unique() {
    let ps = ParamSet::new(["a", "b"]);
    let a = Scalar::param(&ps, "a").unwrap();
    let b = Scalar::param(&ps, "b").unwrap();
    // (a^2-b^2)/(a-b) == a+b
    let num = &(&a * &a) - &(&b * &b);
    let den = &a - &b;
    let q = num.checked_div(&den).unwrap();
    assert_eq!(q, &a + &b);
    // x/x = 1
    let x = &(&a * &b) + &Scalar::int(&ps, 7);
    assert!(x.checked_div(&x).unwrap().is_one());
    // additive inverse
    let z = &(&(&a * &a) - &(&b * &b)) + &(&(&b * &b) - &(&a * &a));
    assert!(z.is_zero());
}

#[test]
fn substitution_pole() {
    let ps = ParamSet::new(["a"]);
    let a = Scalar::param(&ps, "a").unwrap();
    let one = Scalar::one(&ps);
    let s = one.checked_div(&(&a - &Scalar::int(&ps, 1))).unwrap();
    let env = ParamEnv::new().bind("a", rat(1));
    assert!(s.substitute(&env).is_err());
    let sub = parse_scalar("1 - a", &ps).unwrap().substitute(&env).unwrap();
    assert!(sub.is_zero());
}

#[test]
fn sqrt_exact() {
    let ps = ParamSet::new(["a", "b"]);
    let s = parse_scalar("(a*a + 2*a*b + b*b) * 9/4", &ps).unwrap();
    let r = s.sqrt().unwrap();
    assert_eq!(&r * &r, s);
    assert!(parse_scalar("a*b", &ps).unwrap().sqrt().is_err());
}
