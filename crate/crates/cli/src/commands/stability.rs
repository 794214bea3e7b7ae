use anyhow::Result;
use olg_bubbles::export::num;
use olg_bubbles::steady::{spectral_analysis, SpectralReport};

use crate::config::RunConfig;
use crate::report::{out_dir, write_file, Report};

pub fn spectral_section(rep: &mut Report, s: &SpectralReport) {
    let row = |r: &[f64; 3]| r.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ");
    rep.section("linearization at (k*, p*)")
        .num("k_star", s.steady.k)
        .num("p_star", s.steady.p)
        .num("dividend_growth", s.dividend_growth)
        .num("g_k", s.g_k)
        .num("g_p", s.g_p)
        .num("f''(k*)", s.fsecond)
        .kv("J row 1", row(&s.jacobian[0]))
        .kv("J row 2", row(&s.jacobian[1]))
        .kv("J row 3", row(&s.jacobian[2]))
        .num("lambda1", s.lambda1)
        .num("lambda2", s.lambda2)
        .num("lambda3", s.lambda3)
        .num("q(0)", s.q0)
        .num("q(1)", s.q1)
        .kv(
            "char_roots",
            s.char_roots
                .iter()
                .map(|&x| num(x))
                .collect::<Vec<_>>()
                .join(" "),
        )
        .kv("stable_eigenvalues", s.stable_count())
        .kv("classification", s.classification)
        .kv("sensitive", s.sensitive);
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let economy = cfg.economy()?;
    let spectral = spectral_analysis(&economy)?;
    let mut rep = Report::new();
    spectral_section(&mut rep, &spectral);
    let text = rep.finish(cfg);
    write_file(&out_dir(cfg)?, "stability_report.txt", text.as_bytes())?;
    print!("{text}");
    Ok(())
}
