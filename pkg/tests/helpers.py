from lookahead_lasso import standardize
from lookahead_lasso.simulate import SimSpec, generate


def sim_data(n, p, snr=1.0, rho=0.0, seed=0, stream=0):
    X, y, _, _ = generate(SimSpec(n=n, p=p, snr=snr, rho=rho, seed=seed), stream=stream)
    return standardize(X, y)[0]


ACCEPTANCE = []


def report(criterion, passed, detail="", skipped=False):
    """Record and print one acceptance line."""
    status = "SKIP" if skipped else "PASS" if passed else "FAIL"
    line = f"[{status}] {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return passed
