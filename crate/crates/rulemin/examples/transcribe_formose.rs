//! Regenerates the bundled formose reaction data files.
//!
//! The molecules of the main autocatalytic cycle are transcribed atom by
//! atom (explicit hydrogens, bonds labeled `-` and `=`): formaldehyde,
//! glycolaldehyde, glyceraldehyde, dihydroxyacetone, the 2-ketotetrose and
//! the aldotetrose, plus the branched tetrose for the extended system. The
//! ten transitions are the five reversible steps: three aldol additions
//! (with the reverse retro-aldol splits) and two aldose-ketose
//! isomerizations via a hydride shift, each encoded as an element map that
//! keeps every atom and rewires the shifted hydrogen, the changed carbonyl
//! bond and the formed or broken carbon-carbon bond.
//!
//! The input graph sets contain every single molecule and every unordered
//! pair of molecules as a disjoint union: a pair with no listed reaction is
//! negative information that the minimal models must respect.
//!
//! Run with: `cargo run --example transcribe_formose`

use rulemin::formats::{EdgeFile, GraphFile, PosetFile, SystemFile, TransitionFile, VertexFile};

struct Mol {
    name: &'static str,
    atoms: &'static [&'static str],
    bonds: &'static [(usize, usize, &'static str)],
}

/// formaldehyde CH2O: C(=O)(H)(H)
const FA: Mol = Mol {
    name: "formaldehyde",
    atoms: &["C", "O", "H", "H"],
    bonds: &[(0, 1, "="), (0, 2, "-"), (0, 3, "-")],
};

/// glycolaldehyde OHC-CH2OH: C1(=O1)(H1)-C2(H2)(H3)-O2(H4)
const GA: Mol = Mol {
    name: "glycolaldehyde",
    atoms: &["C", "C", "O", "O", "H", "H", "H", "H"],
    bonds: &[
        (0, 2, "="),
        (0, 4, "-"),
        (0, 1, "-"),
        (1, 5, "-"),
        (1, 6, "-"),
        (1, 3, "-"),
        (3, 7, "-"),
    ],
};

/// glyceraldehyde OHC-CHOH-CH2OH
/// atoms: 0:C1 1:C2 2:C3 3:O1(=C1) 4:O2(C2) 5:O3(C3) 6:H(C1) 7:H(C2)
/// 8:H(O2) 9:H(C3) 10:H(C3) 11:H(O3)
const GLY: Mol = Mol {
    name: "glyceraldehyde",
    atoms: &["C", "C", "C", "O", "O", "O", "H", "H", "H", "H", "H", "H"],
    bonds: &[
        (0, 3, "="),
        (0, 6, "-"),
        (0, 1, "-"),
        (1, 7, "-"),
        (1, 4, "-"),
        (4, 8, "-"),
        (1, 2, "-"),
        (2, 9, "-"),
        (2, 10, "-"),
        (2, 5, "-"),
        (5, 11, "-"),
    ],
};

/// dihydroxyacetone HOCH2-CO-CH2OH
/// atoms: 0:C1 1:C2 2:C3 3:O1(C1) 4:O2(=C2) 5:O3(C3) 6:H(C1) 7:H(C1)
/// 8:H(O1) 9:H(C3) 10:H(C3) 11:H(O3)
const DHA: Mol = Mol {
    name: "dihydroxyacetone",
    atoms: &["C", "C", "C", "O", "O", "O", "H", "H", "H", "H", "H", "H"],
    bonds: &[
        (0, 6, "-"),
        (0, 7, "-"),
        (0, 3, "-"),
        (3, 8, "-"),
        (0, 1, "-"),
        (1, 4, "="),
        (1, 2, "-"),
        (2, 9, "-"),
        (2, 10, "-"),
        (2, 5, "-"),
        (5, 11, "-"),
    ],
};

/// 2-ketotetrose (erythrulose) HOCH2-CO-CHOH-CH2OH
/// atoms: 0:C1 1:C2 2:C3 3:C4 4:O1(C1) 5:O2(=C2) 6:O3(C3) 7:O4(C4)
/// 8:H(C1) 9:H(C1) 10:H(O1) 11:H(C3) 12:H(O3) 13:H(C4) 14:H(C4) 15:H(O4)
const KT: Mol = Mol {
    name: "ketotetrose",
    atoms: &[
        "C", "C", "C", "C", "O", "O", "O", "O", "H", "H", "H", "H", "H", "H", "H", "H",
    ],
    bonds: &[
        (0, 8, "-"),
        (0, 9, "-"),
        (0, 4, "-"),
        (4, 10, "-"),
        (0, 1, "-"),
        (1, 5, "="),
        (1, 2, "-"),
        (2, 11, "-"),
        (2, 6, "-"),
        (6, 12, "-"),
        (2, 3, "-"),
        (3, 13, "-"),
        (3, 14, "-"),
        (3, 7, "-"),
        (7, 15, "-"),
    ],
};

/// aldotetrose OHC-CHOH-CHOH-CH2OH
/// atoms: 0:C1 1:C2 2:C3 3:C4 4:O1(=C1) 5:O2(C2) 6:O3(C3) 7:O4(C4)
/// 8:H(C1) 9:H(C2) 10:H(O2) 11:H(C3) 12:H(O3) 13:H(C4) 14:H(C4) 15:H(O4)
const AT: Mol = Mol {
    name: "aldotetrose",
    atoms: &[
        "C", "C", "C", "C", "O", "O", "O", "O", "H", "H", "H", "H", "H", "H", "H", "H",
    ],
    bonds: &[
        (0, 4, "="),
        (0, 8, "-"),
        (0, 1, "-"),
        (1, 9, "-"),
        (1, 5, "-"),
        (5, 10, "-"),
        (1, 2, "-"),
        (2, 11, "-"),
        (2, 6, "-"),
        (6, 12, "-"),
        (2, 3, "-"),
        (3, 13, "-"),
        (3, 14, "-"),
        (3, 7, "-"),
        (7, 15, "-"),
    ],
};

/// branched tetrose OHC-C(OH)(CH2OH)-CH2OH
/// atoms: 0:C1 1:C2 2:C3 3:C4 4:O1(=C1) 5:O2(C2) 6:O3(C3) 7:O4(C4)
/// 8:H(C1) 9:H(O2) 10:H(C3) 11:H(C3) 12:H(O3) 13:H(C4) 14:H(C4) 15:H(O4)
const BT: Mol = Mol {
    name: "branched-tetrose",
    atoms: &[
        "C", "C", "C", "C", "O", "O", "O", "O", "H", "H", "H", "H", "H", "H", "H", "H",
    ],
    bonds: &[
        (0, 4, "="),
        (0, 8, "-"),
        (0, 1, "-"),
        (1, 5, "-"),
        (5, 9, "-"),
        (1, 2, "-"),
        (2, 10, "-"),
        (2, 11, "-"),
        (2, 6, "-"),
        (6, 12, "-"),
        (1, 3, "-"),
        (3, 13, "-"),
        (3, 14, "-"),
        (3, 7, "-"),
        (7, 15, "-"),
    ],
};

struct TransitionSpec {
    /// Component molecule indices of the source graph.
    source: &'static [usize],
    target: &'static [usize],
    /// Total atom correspondence over the component layouts.
    vmap: &'static [(usize, usize)],
    name: &'static str,
}

/// Aldol addition formaldehyde + glycolaldehyde -> glyceraldehyde: the
/// glycolaldehyde alpha carbon bonds to the formaldehyde carbon, one alpha
/// hydrogen moves onto the formaldehyde oxygen, the C=O becomes C-O.
const ALDOL_FA_GA: &[(usize, usize)] = &[
    (0, 2),
    (1, 5),
    (2, 9),
    (3, 10),
    (4, 0),
    (5, 1),
    (6, 3),
    (7, 4),
    (8, 6),
    (9, 7),
    (10, 11),
    (11, 8),
];

/// Hydride-shift isomerization glyceraldehyde -> dihydroxyacetone: the C2
/// hydride moves to C1, the O2 proton moves to O1, the carbonyl migrates.
const ISO_GLY_DHA: &[(usize, usize)] = &[
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 4),
    (5, 5),
    (6, 6),
    (7, 7),
    (8, 8),
    (9, 9),
    (10, 10),
    (11, 11),
];

/// Aldol formaldehyde + dihydroxyacetone -> ketotetrose.
const ALDOL_FA_DHA: &[(usize, usize)] = &[
    (0, 3),
    (1, 7),
    (2, 13),
    (3, 14),
    (4, 2),
    (5, 1),
    (6, 0),
    (7, 6),
    (8, 5),
    (9, 4),
    (10, 11),
    (11, 15),
    (12, 12),
    (13, 8),
    (14, 9),
    (15, 10),
];

/// Hydride-shift isomerization ketotetrose -> aldotetrose.
const ISO_KT_AT: &[(usize, usize)] = &[
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 4),
    (5, 5),
    (6, 6),
    (7, 7),
    (8, 8),
    (9, 9),
    (10, 10),
    (11, 11),
    (12, 12),
    (13, 13),
    (14, 14),
    (15, 15),
];

/// Aldol glycolaldehyde + glycolaldehyde -> aldotetrose; the first copy
/// donates, the second accepts.
const ALDOL_GA_GA: &[(usize, usize)] = &[
    (0, 0),
    (1, 1),
    (2, 4),
    (3, 5),
    (4, 8),
    (5, 9),
    (6, 12),
    (7, 10),
    (8, 2),
    (9, 3),
    (10, 6),
    (11, 7),
    (12, 11),
    (13, 13),
    (14, 14),
    (15, 15),
];

/// Aldol formaldehyde + glyceraldehyde -> branched tetrose (the extended
/// system only): the glyceraldehyde C2 donates its lone hydrogen.
const ALDOL_FA_GLY: &[(usize, usize)] = &[
    (0, 3),
    (1, 7),
    (2, 13),
    (3, 14),
    (4, 0),
    (5, 1),
    (6, 2),
    (7, 4),
    (8, 5),
    (9, 6),
    (10, 8),
    (11, 15),
    (12, 9),
    (13, 10),
    (14, 11),
    (15, 12),
];

fn graph_for(mols: &[usize], table: &[&Mol]) -> GraphFile {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut offset = 0u64;
    for &mi in mols {
        let m = table[mi];
        for (i, a) in m.atoms.iter().enumerate() {
            vertices.push(VertexFile {
                id: offset + i as u64,
                label: a.to_string(),
            });
        }
        for &(u, v, l) in m.bonds {
            edges.push(EdgeFile {
                source: offset + u as u64,
                target: offset + v as u64,
                label: l.to_string(),
                directed: false,
            });
        }
        offset += m.atoms.len() as u64;
    }
    GraphFile { vertices, edges }
}

fn build_system(table: &[&Mol], reactions: &[TransitionSpec]) -> SystemFile {
    // Inputs: every molecule, then every unordered pair, in index order.
    let mut inputs: Vec<Vec<usize>> = Vec::new();
    for i in 0..table.len() {
        inputs.push(vec![i]);
    }
    for i in 0..table.len() {
        for j in i..table.len() {
            inputs.push(vec![i, j]);
        }
    }
    let input_index = |mols: &[usize]| -> usize {
        inputs
            .iter()
            .position(|m| m.as_slice() == mols)
            .expect("source layout listed among the inputs")
    };

    let mut transitions = Vec::new();
    for spec in reactions {
        let source_graph = graph_for(spec.source, table);
        let target_graph = graph_for(spec.target, table);
        let vmap: Vec<(u64, u64)> = spec
            .vmap
            .iter()
            .map(|&(a, b)| (a as u64, b as u64))
            .collect();
        // An edge maps exactly when both endpoint images are bonded in the
        // target; broken-and-formed bonds fall out automatically.
        let image = |v: u64| vmap.iter().find(|&&(a, _)| a == v).map(|&(_, b)| b);
        let mut edge_map = Vec::new();
        for (ei, e) in source_graph.edges.iter().enumerate() {
            let (Some(s), Some(t)) = (image(e.source), image(e.target)) else {
                continue;
            };
            if let Some(fi) = target_graph.edges.iter().position(|f| {
                (f.source == s && f.target == t) || (f.source == t && f.target == s)
            }) {
                edge_map.push((ei, fi));
            }
        }
        transitions.push(TransitionFile {
            source: input_index(spec.source),
            target: target_graph,
            vertex_map: vmap,
            edge_map,
        });
        println!(
            "  {}: {} mapped atoms, {} mapped bonds",
            spec.name,
            spec.vmap.len(),
            transitions.last().unwrap().edge_map.len()
        );
    }

    SystemFile {
        collapse_spectators: true,
        poset: PosetFile {
            bottom: "eps".into(),
            top: "top".into(),
            atoms: vec!["C".into(), "H".into(), "O".into(), "-".into(), "=".into()],
            covers: vec![],
        },
        inputs: inputs.iter().map(|m| graph_for(m, table)).collect(),
        transitions,
    }
}

fn invert(map: &[(usize, usize)]) -> Vec<(usize, usize)> {
    map.iter().map(|&(a, b)| (b, a)).collect()
}

fn main() -> anyhow::Result<()> {
    // Molecule indices in the core system.
    const I_FA: usize = 0;
    const I_GA: usize = 1;
    const I_GLY: usize = 2;
    const I_DHA: usize = 3;
    const I_KT: usize = 4;
    const I_AT: usize = 5;
    const I_BT: usize = 6;

    let core: Vec<&Mol> = vec![&FA, &GA, &GLY, &DHA, &KT, &AT];
    let extended: Vec<&Mol> = vec![&FA, &GA, &GLY, &DHA, &KT, &AT, &BT];

    let inv_aldol_fa_ga = invert(ALDOL_FA_GA);
    let inv_iso_gly_dha = invert(ISO_GLY_DHA);
    let inv_aldol_fa_dha = invert(ALDOL_FA_DHA);
    let inv_iso_kt_at = invert(ISO_KT_AT);
    let inv_aldol_ga_ga = invert(ALDOL_GA_GA);
    let inv_aldol_fa_gly = invert(ALDOL_FA_GLY);
    let leak = |v: &Vec<(usize, usize)>| -> &'static [(usize, usize)] {
        Box::leak(v.clone().into_boxed_slice())
    };

    let core_reactions = vec![
        TransitionSpec {
            source: &[I_FA, I_GA],
            target: &[I_GLY],
            vmap: ALDOL_FA_GA,
            name: "aldol FA+GA -> GLY",
        },
        TransitionSpec {
            source: &[I_GLY],
            target: &[I_FA, I_GA],
            vmap: leak(&inv_aldol_fa_ga),
            name: "retro-aldol GLY -> FA+GA",
        },
        TransitionSpec {
            source: &[I_GLY],
            target: &[I_DHA],
            vmap: ISO_GLY_DHA,
            name: "isomerization GLY -> DHA",
        },
        TransitionSpec {
            source: &[I_DHA],
            target: &[I_GLY],
            vmap: leak(&inv_iso_gly_dha),
            name: "isomerization DHA -> GLY",
        },
        TransitionSpec {
            source: &[I_FA, I_DHA],
            target: &[I_KT],
            vmap: ALDOL_FA_DHA,
            name: "aldol FA+DHA -> KT",
        },
        TransitionSpec {
            source: &[I_KT],
            target: &[I_FA, I_DHA],
            vmap: leak(&inv_aldol_fa_dha),
            name: "retro-aldol KT -> FA+DHA",
        },
        TransitionSpec {
            source: &[I_KT],
            target: &[I_AT],
            vmap: ISO_KT_AT,
            name: "isomerization KT -> AT",
        },
        TransitionSpec {
            source: &[I_AT],
            target: &[I_KT],
            vmap: leak(&inv_iso_kt_at),
            name: "isomerization AT -> KT",
        },
        TransitionSpec {
            source: &[I_GA, I_GA],
            target: &[I_AT],
            vmap: ALDOL_GA_GA,
            name: "aldol GA+GA -> AT",
        },
        TransitionSpec {
            source: &[I_AT],
            target: &[I_GA, I_GA],
            vmap: leak(&inv_aldol_ga_ga),
            name: "retro-aldol AT -> GA+GA",
        },
    ];

    println!("core system:");
    let s0 = build_system(&core, &core_reactions);
    std::fs::write(
        "crates/rulemin/data/formose/s0.json",
        serde_json::to_string_pretty(&s0)?,
    )?;
    println!("wrote crates/rulemin/data/formose/s0.json");

    let mut extended_reactions = core_reactions;
    extended_reactions.push(TransitionSpec {
        source: &[I_FA, I_GLY],
        target: &[I_BT],
        vmap: ALDOL_FA_GLY,
        name: "aldol FA+GLY -> BT",
    });
    extended_reactions.push(TransitionSpec {
        source: &[I_BT],
        target: &[I_FA, I_GLY],
        vmap: leak(&inv_aldol_fa_gly),
        name: "retro-aldol BT -> FA+GLY",
    });

    println!("extended system:");
    let s1 = build_system(&extended, &extended_reactions);
    std::fs::write(
        "crates/rulemin/data/formose/s1.json",
        serde_json::to_string_pretty(&s1)?,
    )?;
    println!("wrote crates/rulemin/data/formose/s1.json");
    Ok(())
}
