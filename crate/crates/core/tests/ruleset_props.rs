use proptest::prelude::*;
use unlenc_core::ruleset::parse_rules;
use unlenc_core::Registry;

fn cond() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => ("!?", "(N|ADJ|ADV|PRED|VI|ROOT|#AGT|PLACE|3SG|SHEAD|STAIL)").prop_map(|(n, a)| format!("{n}{a}")),
        1 => prop::sample::select(vec!["আজ", "সে", "খা"]).prop_map(|h| format!("HW=\"{h}\"")),
    ]
}

fn conds(allow_any: bool) -> BoxedStrategy<String> {
    let list = prop::collection::vec(cond(), 1..4).prop_map(|v| v.join(","));
    if allow_any {
        prop_oneof![1 => Just("ANY".to_string()), 3 => list].boxed()
    } else {
        list.boxed()
    }
}

fn window() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["L", "R"])
}

fn action() -> impl Strategy<Value = (String, bool)> {
    prop_oneof![
        (window(), "[A-Z]{1,4}").prop_map(|(w, a)| (format!("ADD_ATTR({w},{a})"), false)),
        (window(), "[A-Z]{1,4}").prop_map(|(w, a)| (format!("DEL_ATTR({w},{a})"), false)),
        window().prop_map(|w| (format!("MERGE({w})"), true)),
        (prop::sample::select(Registry::BUILTIN.to_vec()), any::<bool>()).prop_map(|(l, lr)| {
            let (h, d) = if lr { ("L", "R") } else { ("R", "L") };
            (format!("REL({l},{h},{d})"), true)
        }),
        (window(), "@[a-z]{2,8}").prop_map(|(w, a)| (format!("UNL_ATTR({w},{a})"), false)),
        Just(("SWAP".to_string(), false)),
        window().prop_map(|w| (format!("INSERT(\"আমি\",{w})"), false)),
        window().prop_map(|w| (format!("REFER({w})"), false)),
        Just(("NOP".to_string(), false)),
    ]
}

fn rule() -> impl Strategy<Value = String> {
    (
        -10i32..300,
        prop::option::of("[a-z][a-z-]{0,10}"),
        conds(false),
        conds(true),
        prop::option::of(conds(true)),
        prop::option::of(conds(true)),
        prop::collection::vec(action(), 1..4),
        prop::sample::select(vec!["STAY", "SHIFT_R", "SHIFT_L"]),
        any::<bool>(),
    )
        .prop_map(|(p, name, l, r, ll, rr, actions, mv, flip)| {
            let deletes = actions.iter().any(|(_, d)| *d);
            let mv = if deletes && mv == "SHIFT_L" { "STAY" } else { mv };
            let (l, r) = if flip { (r, l) } else { (l, r) };
            let mut s = format!("{p}:");
            if let Some(n) = name {
                s.push_str(&format!(" \"{n}\""));
            }
            s.push_str(&format!(" L{{{l}}} R{{{r}}}"));
            if let Some(c) = ll {
                s.push_str(&format!(" LL{{{c}}}"));
            }
            if let Some(c) = rr {
                s.push_str(&format!(" RR{{{c}}}"));
            }
            let acts: Vec<String> = actions.into_iter().map(|(a, _)| a).collect();
            s.push_str(&format!(" => {}; {mv}", acts.join("; ")));
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_is_a_fixed_point(src in rule()) {
        let rs = parse_rules(&src, "gen", &Registry::builtin()).unwrap();
        let canonical = rs.render();
        let back = parse_rules(&canonical, "canon", &Registry::builtin()).unwrap();
        prop_assert_eq!(back.rules(), rs.rules());
        prop_assert_eq!(back.render(), canonical);
    }
}
