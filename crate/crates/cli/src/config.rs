use std::path::{Path, PathBuf};

use serde::Deserialize;

use forest_lll::applications::{Application, FacialThueSpec, FrugalSpec, NonrepetitiveSpec};
use forest_lll::graph::{FaceSet, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Nonrepetitive,
    FacialThue,
    Frugal,
}

/// Contents of a `--config` TOML file. Relative paths are resolved against
/// the file's directory.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<Kind>,
    /// Edge-list file, or a generator: `grid:WxH`, `cycle:N`, `path:N`,
    /// `complete:N`, `star:N`.
    pub graph: Option<String>,
    /// Face file (facial Thue only).
    pub faces: Option<PathBuf>,
    /// Per-edge list file (facial Thue only); one line of colors per edge.
    pub lists: Option<PathBuf>,
    pub k: Option<usize>,
    pub beta: Option<usize>,
    pub l_max: Option<usize>,
    /// Maximum degree for spectrum-only evaluation when no graph is given.
    pub delta: Option<usize>,
    pub solver: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub step_cap: Option<u64>,
    pub out: Option<PathBuf>,
    pub criterion: Option<String>,
    #[serde(default)]
    pub check_forests: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(g) = &cfg.graph {
            if !g.contains(':') {
                cfg.graph = Some(base.join(g).to_string_lossy().into_owned());
            }
        }
        cfg.faces = cfg.faces.map(|p| base.join(p));
        cfg.lists = cfg.lists.map(|p| base.join(p));
        cfg.out = cfg.out.map(|p| base.join(p));
        Ok(cfg)
    }

    pub fn kind(&self) -> Result<Kind, String> {
        self.kind.ok_or_else(|| "config: `kind` is required".to_string())
    }

    pub fn k(&self) -> Result<usize, String> {
        self.k.ok_or_else(|| "config: `k` is required".to_string())
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, String> {
        v.ok_or_else(|| format!("config: `{name}` is required"))
    }

    pub fn load_graph(&self) -> Result<Option<SimpleGraph>, String> {
        let Some(g) = &self.graph else { return Ok(None) };
        if let Some((name, arg)) = g.split_once(':') {
            return generated(name, arg).map(Some);
        }
        let text = std::fs::read_to_string(g).map_err(|e| format!("{g}: {e}"))?;
        SimpleGraph::parse_edge_list(&text).map(Some).map_err(|e| format!("{g}: {e}"))
    }

    /// The full application; requires a graph.
    pub fn application(&self) -> Result<Application, String> {
        let graph = self.load_graph()?.ok_or("config: `graph` is required")?;
        let err = |e: forest_lll::Error| e.to_string();
        Ok(match self.kind()? {
            Kind::Nonrepetitive => {
                Application::Nonrepetitive(NonrepetitiveSpec::new(graph, self.k()?, Self::need(self.l_max, "l_max")?).map_err(err)?)
            }
            Kind::FacialThue => {
                let path = self.faces.as_ref().ok_or("config: `faces` is required")?;
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let faces = FaceSet::parse(&graph, &text).map_err(|e| format!("{}: {e}", path.display()))?;
                let l_max = Self::need(self.l_max, "l_max")?;
                let spec = match &self.lists {
                    Some(p) => {
                        let lists = parse_lists(p)?;
                        FacialThueSpec::new(graph, faces, lists, l_max)
                    }
                    None => FacialThueSpec::identical_lists(graph, faces, self.k()?, l_max),
                };
                Application::FacialThue(spec.map_err(err)?)
            }
            Kind::Frugal => Application::Frugal(FrugalSpec::new(graph, self.k()?, Self::need(self.beta, "beta")?).map_err(err)?),
        })
    }
}

fn parse_lists(path: &Path) -> Result<Vec<Vec<u32>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| format!("{}: bad color `{t}`", path.display())))
                .collect()
        })
        .collect()
}

fn generated(name: &str, arg: &str) -> Result<SimpleGraph, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("graph generator `{name}`: bad size `{s}`"));
    Ok(match name {
        "grid" => {
            let (w, h) = arg.split_once('x').ok_or("grid generator expects `grid:WxH`")?;
            SimpleGraph::grid(num(w)?, num(h)?)
        }
        "cycle" => SimpleGraph::cycle(num(arg)?),
        "path" => SimpleGraph::path(num(arg)?),
        "complete" => SimpleGraph::complete(num(arg)?),
        "star" => SimpleGraph::star(num(arg)?),
        _ => return Err(format!("unknown graph generator `{name}`")),
    })
}
