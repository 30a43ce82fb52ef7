use sgqft_core::transform::dual_abstract_f_labelled;

fn main() {
    for (g, ls) in [(0u32, [2u32,1u32]), (0,[3,0]), (1,[1,0]), (1,[1,1]), (1,[2,0]), (2,[0,0])] {
        let dual = dual_abstract_f_labelled(g, &ls, 2).unwrap();
        println!("== (g;l)=({};{},{}) -> {} terms", g, ls[0], ls[1], dual.n_terms());
        for (_, gr, c) in dual.iter() {
            println!("  {} * {}", c, gr.to_json());
        }
    }
}
