use folab::gen::{
    gen_colors, gen_decoration, gen_forest_into, gen_labeling, gen_sc_forest_into, gen_sc_young,
    gen_triple, gen_young, rng_from_seed, GenParams,
};
use folab::sc::ScOperad;
use folab::{
    compose, reduce, validate_wpoint, w_equal, w_sigma, Forest, Operad, ReduceOrder,
    TerminalOperad, WPoint,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn terminal_chain(
    p: &GenParams,
    rng: &mut ChaCha8Rng,
) -> (TerminalOperad, Forest, Forest, Forest) {
    let colors = gen_colors(rng);
    let z = gen_young(&colors, p, rng);
    let h = gen_forest_into(&z, p, rng);
    let g = gen_forest_into(&h.source, p, rng);
    let f = gen_forest_into(&g.source, p, rng);
    (TerminalOperad { colors }, h, g, f)
}

fn sc_chain(d: usize, p: &GenParams, rng: &mut ChaCha8Rng) -> (Forest, Forest, Forest) {
    let z = gen_sc_young(d, p, rng);
    let h = gen_sc_forest_into(&z, d, p.moves, rng);
    let g = gen_sc_forest_into(&h.source, d, p.moves, rng);
    let f = gen_sc_forest_into(&g.source, d, p.moves, rng);
    (h, g, f)
}

#[test]
#[ignore]
fn repro() {
    let p = GenParams::default();
    let mut rng = rng_from_seed(1005);
    for i in 0..200 {
        let (op, _, g, f) = terminal_chain(&p, &mut rng);
        let t = gen_labeling(&g, &mut rng);
        let alpha = gen_decoration(&op, &f.source, &mut rng);
        let gf = compose(&g, &f).unwrap();
        let sigma_t = w_sigma(&g, &f, &t).unwrap();
        let acted = op.act(&f, &alpha).unwrap();
        let p_left = WPoint { shape: gf, lengths: sigma_t, decoration: alpha };
        let p_right = WPoint { shape: g.clone(), lengths: t, decoration: acted };
        assert!(w_equal(&op, &p_left, &p_right, TOL).unwrap(), "terminal {i}");
        let r0 = reduce(&op, &p_left, TOL, ReduceOrder::ZeroEdgesFirst).unwrap();
        for _ in 0..5 {
            let rs = reduce(&op, &p_left, TOL, ReduceOrder::Seeded(rng.gen())).unwrap();
            assert!(w_equal(&op, &r0, &rs, TOL).unwrap(), "terminal {i}");
        }
    }
    let op = ScOperad::new(2);
    for i in 0..=10 {
        let (_, g, f) = sc_chain(2, &p, &mut rng);
        let t = gen_labeling(&g, &mut rng);
        let alpha = gen_decoration(&op, &f.source, &mut rng);
        let gf = compose(&g, &f).unwrap();
        let sigma_t = w_sigma(&g, &f, &t).unwrap();
        let acted = op.act(&f, &alpha).unwrap();
        let p_left = WPoint { shape: gf.clone(), lengths: sigma_t, decoration: alpha };
        let p_right = WPoint { shape: g.clone(), lengths: t, decoration: acted };
        validate_wpoint(&op, &p_left).unwrap();
        validate_wpoint(&op, &p_right).unwrap();
        let ok = w_equal(&op, &p_left, &p_right, TOL).unwrap();
        if ok {
            let _r0 = reduce(&op, &p_left, TOL, ReduceOrder::ZeroEdgesFirst).unwrap();
            for _ in 0..5 {
                let _: u64 = rng.gen();
            }
        }
        if !ok {
            println!("=== disc case {i} fails ===");
            println!("g  = {}", serde_json::to_string(&g).unwrap());
            println!("f  = {}", serde_json::to_string(&f).unwrap());
            println!("t  = {}", serde_json::to_string(&p_right.lengths).unwrap());
            println!("alpha = {}", serde_json::to_string(&p_left.decoration).unwrap());
            let rl = reduce(&op, &p_left, TOL, ReduceOrder::ZeroEdgesFirst).unwrap();
            let rr = reduce(&op, &p_right, TOL, ReduceOrder::ZeroEdgesFirst).unwrap();
            println!("reduced left shape  = {}", serde_json::to_string(&rl.shape).unwrap());
            println!("reduced left lengths = {}", serde_json::to_string(&rl.lengths).unwrap());
            println!("reduced left dec = {}", serde_json::to_string(&rl.decoration).unwrap());
            println!("reduced right shape = {}", serde_json::to_string(&rr.shape).unwrap());
            println!("reduced right lengths = {}", serde_json::to_string(&rr.lengths).unwrap());
            println!("reduced right dec = {}", serde_json::to_string(&rr.decoration).unwrap());
            panic!("disc case {i}");
        }
    }
}
