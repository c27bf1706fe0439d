//! JSON layouts shown in `--help`.

macro_rules! graph_input {
    () => {
        "\
INPUT (graph JSON, or use --family):
  {\"n\": 5, \"edges\": [[0,1],[1,2],[2,3],[3,4],[0,4]], \"labels\": [\"a\",\"b\",\"c\",\"d\",\"e\"]}
  edges are pairs i<j, 0-based; labels optional.
FAMILIES:
  cycle --n N | path --n N | complete --n N | prism --n N | moebius --n N (2N vertices)
  circulant --n N --offsets 1,4 | johnson --n N --k K | johnson-gqs --q Q --s S"
    };
}

pub const BOUNDS: &str = concat!(
    graph_input!(),
    "\n\n",
    "\
OUTPUT:
  {\"alpha\": int, \"theta\": float, \"alpha_star\": float, \"ratio\": float,
   \"witness_independent_set\": [int], \"maximal_cliques\": [[int]]}"
);

pub const MEMBERSHIP: &str = concat!(graph_input!(), "\n\n", "\
ASSIGNMENT: --p 0.5,0.5,... | --p-file FILE (JSON array of numbers) | --constant X
OUTPUT:
  {\"stab\": {\"member\": bool, \"combination\": [[[int], float]], \"separating\": [[float], float]|null},
   \"th\": {\"member\": bool, \"theta_complement\": float|null},
   \"qstab\": {\"member\": bool, \"max_clique_sum\": float, \"violated_clique\": [int]|null,
             \"negative_vertex\": int|null}}");

pub const DUALITY: &str = concat!(
    graph_input!(),
    "\n\n",
    "\
OUTPUT:
  {\"graph\": str, \"n\": int, \"theta\": float, \"theta_complement\": float, \"product\": float,
   \"vertex_transitive\": bool, \"self_complementary\": bool, \"e_principle_max\": float|null,
   \"checks\": [{\"name\": str, \"pass\": bool, \"detail\": str}]}"
);

pub const SUITE_OPS: &str = "\
OUTPUT:
  {\"pass\": bool, \"rows\": [{\"base\": str, \"operation\": str, \"n\": int, \"theta_base\": float,
   \"theta\": float, \"expected\": float, \"pass\": bool}]}
Exit status 1 when a row misses its expected value.";

pub const SUITE_CIRCULANT10: &str = "\
OUTPUT:
  {\"pass\": bool, \"scanned\": int, \"connected\": int,
   \"rows\": [{\"graph\": str, \"alpha\": int, \"theta\": float, \"alpha_star\": float,
     \"theta_over_alpha\": float, \"e_principle_max\": float, \"identification\": str|null,
     \"identified\": bool}],
   \"disconnected_gaps\": [str], \"checks\": [{\"name\": str, \"pass\": bool, \"detail\": str}]}
Exit status 1 when a check fails.";

pub const SUITE_ACCEPTANCE: &str = "\
OUTPUT:
  {\"pass\": bool, \"criteria\": [{\"id\": int, \"title\": str, \"pass\": bool,
   \"checks\": [{\"name\": str, \"pass\": bool, \"detail\": str}]}]}
With --table a plain-text PASS/FAIL table is printed instead.
Exit status 1 when a criterion fails.";

pub const KS_CHECK: &str = "\
INPUT (vector system JSON, or use --family p33|p33-table|ks8|ks10):
  {\"d\": 3, \"vectors\": [[1,0,0],[0,1,0],...], \"labels\": [str]?, \"tol\": float?}
OUTPUT:
  {\"status\": \"COLORABLE\", \"witness\": [0|1], \"vectors\": int, \"bases\": int}
  {\"status\": \"UNCOLORABLE\", \"trace\": [{\"event\": str, ...}], \"trace_truncated\": bool, ...}";

pub const KS_MULTIPLICATIVE: &str = "\
INPUT (operator proof JSON, or use --family peres-mermin|mermin-star):
  {\"operators\": [\"XI\", \"IX\", ...], \"lines\": [[0,1,2], ...], \"signs\": [1, -1, ...]}
  each operator is a Pauli string or a square matrix of numbers / [re, im] pairs.
OUTPUT:
  {\"proof\": bool, \"operators_ok\": bool, \"lines_commute\": bool, \"products_match\": bool,
   \"assignment_exists\": bool, \"assignment\": [int]|null}";

macro_rules! scenario_input {
    () => {
        "\
INPUT (empirical model JSON, or use --family specker|kcbs):
  {\"measurements\": [\"A\",\"B\"], \"outcomes\": [\"0\",\"1\"], \"contexts\": [[\"A\",\"B\"]],
   \"tables\": {\"A,B\": {\"0,0\": 0.5, \"1,1\": 0.5}}}
  missing outcome keys have probability 0."
    };
}

pub const SCENARIO_CHECK: &str = concat!(
    scenario_input!(),
    "\n\n",
    "\
OUTPUT:
  {\"nondisturbing\": bool, \"max_deviation\": float, \"offending\": [int, int]|null}"
);

pub const SCENARIO_GLOBAL: &str = concat!(
    scenario_input!(),
    "\n\n",
    "\
OUTPUT:
  {\"has_global_section\": bool, \"distance\": float,
   \"witness\": [[[int], float]]|null, \"certificate\": [[float]]|null}"
);

pub const SCENARIO_EVALUATE: &str = concat!(scenario_input!(), "\n\n", "\
INEQUALITY: --gamma 1,1,1,1,-1 (n-cycle signs) | --inequality FILE
  {\"terms\": [[{\"measurements\": [int], \"outcomes\": [int]}, float]], \"offset\": float, \"bound\": float}
OUTPUT:
  {\"value\": float, \"bound\": float, \"violated\": bool}");

macro_rules! box_input {
    () => {
        "\
INPUT (box JSON, or use --family pr|singlet with --d and --strength for pr):
  {\"parties\": 2, \"settings\": 2, \"outcomes\": 2,
   \"table\": {\"0,0\": {\"0,0\": 0.5, \"1,1\": 0.5}, ...}}
  table[settings][outcomes], keys comma-joined per party; settings may be a per-party list."
    };
}

pub const BOX_CHECK: &str = concat!(box_input!(), "\n\n", "\
OUTPUT:
  {\"nosignaling\": {\"nosignaling\": bool, \"max_deviation\": float, \"offending\": ...|null},
   \"locality\": {\"local\": bool, \"distance\": float, \"model\": [...]|null, \"certificate\": ...|null}}");

pub const BOX_VALUE: &str = concat!(
    box_input!(),
    "\n\n",
    "\
OUTPUT:
  {\"value\": float}"
);

pub const BOX_LO: &str = concat!(
    box_input!(),
    "\n\n",
    "\
Two copies of a two-party binary box; defaults to the PR box.
OUTPUT:
  {\"value\": float, \"events\": [str], \"probabilities\": [float], \"pairwise_orthogonal\": bool}"
);

pub const BOX_VANDAM: &str = concat!(
    box_input!(),
    "\n\n",
    "\
Defaults to the PR box of the given --strength.
OUTPUT:
  {\"success\": float, \"exact_success\": float, \"mutual_information\": float,
   \"message_length\": int, \"trials\": int, \"seed\": int}"
);

pub const BOX_NESTED: &str = "\
OUTPUT:
  {\"d\": int, \"e\": float, \"levels\": int, \"success\": float, \"closed_form\": float,
   \"violation_condition\": bool, \"simulated\": float|null}
--trials with --seed adds a Monte-Carlo estimate.";

pub const BOX_IP: &str = "\
OUTPUT:
  {\"result\": 0|1, \"bits_communicated\": int, \"direct\": 0|1, \"agrees\": bool}";

pub const PLOTDATA: &str = concat!(
    graph_input!(),
    "\n\n",
    "\
--n takes a list and ranges, e.g. 5,7,9 or 4-12.
OUTPUT (CSV, LF line endings):
  graph,n,alpha,theta,alpha_star,theta_over_alpha"
);
