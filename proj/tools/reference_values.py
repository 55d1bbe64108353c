"""Independent numpy re-derivation of the circuit model; prints values frozen in the C++ tests."""
import numpy as np

BRANCHES = ["2a", "2b", "3a", "3b"]
TABLE_S1 = dict(c1=1.0, ct=0.1, c2a=1.2, c2b=1.1, c3a=1.0, c3b=1.0,
                c2as=0.1824, c2bs=0.1934, c3as=0.1560, c3bs=0.1799)


def model(c, n=30, pad=8):
    part = {k: c["c" + k + "s"] / (c["c" + k] + c["c" + k + "s"]) for k in BRANCHES}
    csum = c["c1"] + c["ct"] + sum(c["c" + k] * part[k] for k in BRANCHES)
    e_t = 1 / (8 * csum)
    alpha = csum**3 / (324 * c["ct"])
    beta = 6 * c["ct"] * alpha
    ej = 3 * csum**2 / beta
    e_k = {k: 1 / (8 * c["c" + k + "s"]) for k in BRANCHES}
    ejt = ej / (1 + sum(1 / e_k[k] for k in BRANCHES))
    ejk = {k: ejt / e_k[k] for k in BRANCHES}

    m = n + pad
    a = np.diag(np.sqrt(np.arange(1, m)), 1)
    pz = 0.5 * (ej / (2 * e_t)) ** 0.25
    fz = (2 * e_t / ej) ** 0.25
    p2 = -(pz**2) * (a - a.T) @ (a - a.T)
    p4 = p2 @ p2
    p6 = p4 @ p2
    c2, c3, c4 = -beta / (12 * csum**4), beta**2 / (18 * csum**7), -beta**3 / (18 * csum**10)
    ph2 = fz**2 * (a + a.T) @ (a + a.T)
    h = p2 / (2 * csum) + c2 * p4 + c3 * p6 + ej * (ph2 / 2 - ph2 @ ph2 / 24)
    w_op = 6 * c2 * p2 + 15 * c3 * p4 + 28 * c4 * p6
    h, w_op = h[:n, :n], w_op[:n, :n]
    vals, vecs = np.linalg.eigh(h)
    moment = np.array([vecs[:, i] @ w_op @ vecs[:, i] for i in range(4)])
    first_order = np.diag(h)[1:4] - h[0, 0]

    plasma = np.sqrt(8 * ej * e_t)
    omega_s, kerr = {}, {}
    for k in BRANCHES:
        d = part[k] * ejk[k] / (2 * np.sqrt(2 * ej * e_t))
        omega_s[k] = part[k] * plasma + d * moment[0]
        kerr[k] = -d * (moment[1:] - moment[0])
    return dict(csum=csum, e_t=e_t, alpha=alpha, beta=beta, ej=ej, ejt=ejt, ejk=ejk,
                levels=vals[1:4] - vals[0], first_order=first_order, omega_s=omega_s, kerr=kerr)


def even_response(omega, k_lines, k, gamma_d):
    n = len(omega)
    a_mat = -1j * np.diag(omega) - 0.5 * k_lines.T @ k_lines - 0.75 * gamma_d * np.eye(n)
    amp = -np.linalg.solve(a_mat + 1j * k * np.eye(n), -1j * k_lines[0])
    s = np.array([1, 0, 0]) - 1j * k_lines @ amp
    return s * np.array([1, -1, -1])


if __name__ == "__main__":
    r = model(TABLE_S1)
    for key in ["csum", "e_t", "alpha", "beta", "ej", "ejt"]:
        print(f"{key} {r[key]:.15g}")
    print("ejk", " ".join(f"{r['ejk'][k]:.15g}" for k in BRANCHES))
    print("levels", " ".join(f"{v:.15g}" for v in r["levels"]))
    print("first_order", " ".join(f"{v:.15g}" for v in r["first_order"]))
    print("omega_s", " ".join(f"{r['omega_s'][k]:.15g}" for k in BRANCHES))
    for i in range(3):
        print(f"kerr_T{i + 1}", " ".join(f"{r['kerr'][k][i]:.15g}" for k in BRANCHES))

    # GS context, lifetimes (t1, t3, a, b) = (1000, 1000, 10, 10), gamma_d = 0.01.
    om = [r["levels"][0], r["levels"][2]] + [r["omega_s"][k] for k in BRANCHES]
    taus = [1000, 1000, 10, 10, 10, 10]
    lines = [{0}, {0}, {0, 1}, {0, 1}, {0, 2}, {0, 2}]
    kl = np.zeros((3, 6))
    for x in range(6):
        for ch in lines[x]:
            kl[ch, x] = np.sqrt(2 / taus[x])
    for k in [r["omega_s"]["2a"], 1.0]:
        s = even_response(np.array(om), kl, k, 0.01)
        print(f"even_gs k={k:.15g}", " ".join(f"{v.real:.15g} {v.imag:.15g}" for v in s))
