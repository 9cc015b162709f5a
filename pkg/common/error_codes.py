CONFIG_FILE_NOT_FOUND = "Config file not found: {path}"

CONFIG_LINE_NOT_PARSED = "Line {line}: could not parse statement {text!r}"

CONFIG_UNKNOWN_KEY = "Line {line}: unknown key {key!r}"

CONFIG_BAD_VALUE = "Line {line}: invalid value for {key!r}: {detail}"

CONFIG_INVALID = "Configuration violates {count} invariant(s): {violations}"

GEN_PROB_SUM = "g1+g2 <= 1"

STATE_SPACE_TOO_LARGE = (
    "Geo/D/C/C state space exceeds {cap} states; "
    "use the Geo/Geo surrogate (engine geo-mg) instead"
)

SINGULAR_BALANCE = "Balance system could not be solved: {detail}"

RESIDUAL_TOO_LARGE = "Steady state residual {residual:.3e} exceeds tolerance {tol:.1e}"

SINGULAR_LEVEL = "Censored level matrix at level k={level} is singular (cond={cond:.3e})"

POWER_ITERATION_DIVERGED = "Power iteration did not converge in {max_iter} iterations"

INFEASIBLE_ADMISSION = "Admission ({a1}, {a2}) does not fit occupancy {occupancy} of {capacity}"

UNKNOWN_ENGINE = "Unknown engine {engine!r}; choose one of {choices}"

EMPTY_FEASIBLE_SET = "No grid point satisfies the energy budget E/T={budget}"
