#!/usr/bin/env python3
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain a
# copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent sympy derivation of the values the C++ tests pin.

Writes pins.json next to this file. Nothing here shares code with the
library: H, A, B are rebuilt from their closed forms and differentiated
symbolically.

    python3 derive_pins.py [output.json]
"""
import json
import os
import random
import sys

import sympy as sp

xi, eta, pxi, peta = sp.symbols('xi eta p_xi p_eta')
ka, la, mu, nu, k, l, m, n, E = sp.symbols('kappa lambda mu nu k l m n E')
q = [xi, eta]
p = [pxi, peta]
def PB(F,G):
    return sum(sp.diff(F,q[i])*sp.diff(G,p[i])-sp.diff(F,p[i])*sp.diff(G,q[i]) for i in range(2))
e=sp.exp
def classI(F,G,f,g,Ft,Gt,ft,gt,Xm,pXf):
    u=xi+eta; v=xi-eta
    gg=F(u)+G(v); w=f(u)+g(v)
    H=(pxi*peta+w)/gg
    A=pxi**2+peta**2-2*pxi*peta*(F(u)-G(v))/gg+4*(f(u)*G(v)-g(v)*F(u))/gg
    X=Xm(xi); Y=Xm(eta); pX=pXf(xi)*pxi; pY=pXf(eta)*peta
    U=X+Y; V=X-Y
    B=pX**2+pY**2-2*pX*pY*(Ft(U)-Gt(V))/(Ft(U)+Gt(V))+4*(ft(U)*Gt(V)-gt(V)*Ft(U))/(Ft(U)+Gt(V))
    return H,A,B
def classII(F,G,f,g,iF,if_,Ft,Gt,ft,gt,Xm,pXf):
    gg=F(eta)*xi+G(eta); w=f(eta)*xi+g(eta)
    H=(pxi*peta+w)/gg
    A=pxi**2-2*pxi*peta*iF(eta)/gg-2*w*iF(eta)/gg+2*if_(eta)
    X=Xm(xi); Y=Xm(eta); pX=pXf(xi)*pxi; pY=pXf(eta)*peta
    U=X+Y; V=X-Y
    B=pX**2+pY**2-2*pX*pY*(Ft(U)-Gt(V))/(Ft(U)+Gt(V))+4*(ft(U)*Gt(V)-gt(V)*Ft(U))/(Ft(U)+Gt(V))
    return H,A,B
S = sp.sqrt
systems={}
# I1
systems['I1']=(classI(lambda u:4*la*u**2+ka*u+nu/2, lambda v:-la*v**2+mu/v**2+nu/2,
  lambda u:4*l*u**2+k*u+n/2, lambda v:-l*v**2+m/v**2+n/2,
  lambda u:la*u**6/256+ka*u**4/128+nu*u**2/16-mu/u**2, lambda v:-la*v**6/256-ka*v**4/128-nu*v**2/16+mu/v**2,
  lambda u:l*u**6/256+k*u**4/128+n*u**2/16-m/u**2, lambda v:-l*v**6/256-k*v**4/128-n*v**2/16+m/v**2,
  lambda s:2*S(s), lambda s:S(s)),
  dict(alpha=0,gamma=0,a=-6,delta=16*(ka*E-k),eps=256*(la*E-l),zeta=-32*(ka*E-k)*(nu*E-n),d=8*(nu*E-n),
       z=8*(nu*E-n)**2-128*(la*E-l)*(mu*E-m),
       K=32*(nu*E-n)**3+512*(la*E-l)*(mu*E-m)*(nu*E-n)-64*(ka*E-k)**2*(mu*E-m)))
systems['I2']=(classI(lambda u:la*u**2+ka/u**2+nu/2, lambda v:-la*v**2+mu/v**2+nu/2,
  lambda u:l*u**2+k/u**2+n/2, lambda v:-l*v**2+m/v**2+n/2,
  lambda u:4*la*e(2*u)+nu*e(u), lambda v:ka*e(v)/(1+e(v))**2+mu*e(v)/(-1+e(v))**2,
  lambda u:4*l*e(2*u)+n*e(u), lambda v:k*e(v)/(1+e(v))**2+m*e(v)/(-1+e(v))**2,
  lambda s:sp.log(s), lambda s:s),
  dict(alpha=8,gamma=0,a=0,delta=0,eps=256*(la*E-l),zeta=-32*(nu*E-n)**2+256*(la*E-l)*((mu-ka)*E-(m-k)),d=0,
       z=32*((ka+mu)*E-(k+m))*(nu*E-n),
       K=256*(la*E-l)*((ka+mu)*E-(k+m))**2+128*((ka-mu)*E-(k-m))*(nu*E-n)**2))
def I3F(a,b): return lambda u:a*e(2*u)/(-1+e(2*u))**2+b*e(u)*(1+e(2*u))/(-1+e(2*u))**2
tn=sp.tan; ct=sp.cot
systems['I3']=(classI(I3F(ka,la),I3F(mu,nu),I3F(k,l),I3F(m,n),
  lambda u:(ka+2*la)/4*tn(u)**2+(2*nu-mu)/4*ct(u)**2+(la+nu)/2,
  lambda v:(2*la-ka)/4*tn(v)**2+(mu+2*nu)/4*ct(v)**2+(la+nu)/2,
  lambda u:(k+2*l)/4*tn(u)**2+(2*n-m)/4*ct(u)**2+(l+n)/2,
  lambda v:(2*l-k)/4*tn(v)**2+(m+2*n)/4*ct(v)**2+(l+n)/2,
  lambda s:sp.atan(e(s)), lambda s:e(s)+e(-s)),
  dict(alpha=-32,gamma=8,a=0,delta=0,eps=0,zeta=-32*(la*E-l)*(nu*E-n),d=64*(k-m)-64*(ka-mu)*E,
       z=32*((la-nu)*E-(l-n))**2-32*(ka*E-k)*(mu*E-m),
       K=64*(ka*E-k)*(nu*E-n)**2-64*(la*E-l)**2*(mu*E-m)))
systems['II1']=(classII(lambda s:ka*s+la, lambda s:mu*s+nu, lambda s:k*s+l, lambda s:m*s+n,
  lambda s:ka*s**2/2+la*s, lambda s:k*s**2/2+l*s,
  lambda u:ka*u**2/4+(la+mu)*u/2+nu/2, lambda v:-ka*v**2/4+(la-mu)*v/2+nu/2,
  lambda u:k*u**2/4+(l+m)*u/2+n/2, lambda v:-k*v**2/4+(l-m)*v/2+n/2,
  lambda s:s, lambda s:1),
  dict(alpha=0,gamma=0,a=0,delta=8*(k-ka*E),eps=0,zeta=8*(la*E-l)**2,d=16*(k-ka*E),z=8*(la*E-l)**2-8*(mu*E-m)**2,
       K=16*(nu*E-n)**2*(ka*E-k)-32*(la*E-l)*(mu*E-m)*(nu*E-n)))
systems['II2']=(classII(lambda s:ka/S(s)+la, lambda s:3*ka*S(s)+la*s+mu/S(s)+nu,
  lambda s:k/S(s)+l, lambda s:3*k*S(s)+l*s+m/S(s)+n,
  lambda s:2*ka*S(s)+la*s, lambda s:2*k*S(s)+l*s,
  lambda u:la*u**4/128+ka*u**3/16+nu*u**2/16+mu*u/4, lambda v:-la*v**4/128+ka*v**3/16+mu*v/4-nu*v**2/16,
  lambda u:l*u**4/128+k*u**3/16+n*u**2/16+m*u/4, lambda v:-l*v**4/128+k*v**3/16+m*v/4-n*v**2/16,
  lambda s:2*S(s), lambda s:S(s)),
  dict(alpha=0,gamma=0,a=-6,delta=4*(l-la*E),eps=0,zeta=8*(ka*E-k)**2,d=8*(nu*E-n),
       z=-8*(ka*E-k)*(mu*E-m)-2*(nu*E-n)**2,
       K=8*(la*E-l)*(mu*E-m)**2-16*(ka*E-k)*(mu*E-m)*(nu*E-n)))
systems['II3']=(classII(lambda s:la*s+ka/s**3, lambda s:nu+mu/s**2, lambda s:l*s+k/s**3, lambda s:n+m/s**2,
  lambda s:la*s**2/2-ka/(2*s**2), lambda s:l*s**2/2-k/(2*s**2),
  lambda u:la*e(2*u)+nu*e(u), lambda v:ka*e(2*v)+mu*e(v), lambda u:l*e(2*u)+n*e(u), lambda v:k*e(2*v)+m*e(v),
  lambda s:sp.log(s), lambda s:s),
  dict(alpha=8,gamma=0,a=0,delta=0,eps=0,zeta=32*(ka*E-k)*(la*E-l),d=0,z=32*(mu*E-m)*(nu*E-n),
       K=64*(la*E-l)*(mu*E-m)**2-64*(ka*E-k)*(nu*E-n)**2))


def at(params):
    names = [ka, la, mu, nu, k, l, m, n]
    return dict(zip(names, [sp.nsimplify(v) for v in params]))


def point(x, y, px=0, py=0):
    return {xi: sp.nsimplify(x), eta: sp.nsimplify(y), pxi: sp.nsimplify(px), peta: sp.nsimplify(py)}


def num(expr, pt=None):
    if pt is not None:
        expr = expr.subs(pt)
    return float(sp.N(expr, 30))


def metric(name, par):
    (H, _, _), _ = systems[name]
    Hs = H.subs(par)
    # H = (p_xi p_eta + w) / g, so g = 1 / d^2 H / dp_xi dp_eta.
    return sp.simplify(1 / sp.diff(Hs, pxi, peta))


def curvature(g):
    return -(g * sp.diff(g, xi, eta) - sp.diff(g, xi) * sp.diff(g, eta)) / (2 * g**3)


def casimir_polynomial(name, par):
    """C^2 as a polynomial in (H, A, B) for the given parameters."""
    _, c = systems[name]
    Hs, As, Bs = sp.symbols('H A B')
    cc = {key: sp.sympify(v).subs(par).subs(E, Hs) for key, v in c.items()}
    expr = (cc['K'] + 2 * cc['alpha'] * As**2 * Bs + 2 * cc['gamma'] * As * Bs**2
            + 2 * cc['delta'] * As * Bs + cc['eps'] * Bs**2 + 2 * cc['zeta'] * Bs
            - sp.Rational(2, 3) * cc['a'] * As**3 - cc['d'] * As**2 - 2 * cc['z'] * As)
    poly = sp.Poly(sp.expand(expr), Hs, As, Bs)
    return poly, (Hs, As, Bs)


GENERIC = (1, 0.5, -0.3, 2, 0.4, -0.1, 0.2, 1)
DOMAIN = {'I1': (0.2, 2, 0.2, 2), 'I2': (0.3, 2, 0.3, 2), 'I3': (-1, 1, -1, 1),
          'II1': (0.5, 2, 0.5, 2), 'II2': (0.2, 2, 0.3, 2), 'II3': (0.3, 2, 0.3, 2)}


def main():
    out = {}
    random.seed(7)

    # Jet check: H of I1 with (mu, nu) = (1, 2) and no potential.
    (H, A, B), _ = systems['I1']
    Hs = H.subs(at((0, 0, 1, 2, 0, 0, 0, 0)))
    pt = point(1.0, 0.3, 0.5, -0.2)
    v = [xi, eta, pxi, peta]
    out['jet_h_i1'] = {
        'point': [1.0, 0.3, 0.5, -0.2],
        'value': num(Hs, pt),
        'grad': [num(sp.diff(Hs, a), pt) for a in v],
        'hess': [[num(sp.diff(Hs, a, b), pt) for b in v] for a in v],
    }

    # B of II1 with kappa = k = 1 at (1, 2, 1, 1).
    (_, _, B2), _ = systems['II1']
    out['b_ii1'] = num(B2.subs(at((1, 0, 0, 0, 1, 0, 0, 0))), point(1, 2, 1, 1))

    # Characteristic equation: 6 A'^2 = 3 gamma A^2 + 3 alpha A - a for
    # A = (e^s + e^-s)^2 with (alpha, gamma) = (-32, 8): solve for a.
    s = sp.symbols('s')
    Achar = (sp.exp(s) + sp.exp(-s))**2
    a_expr = sp.simplify(3 * 8 * Achar**2 + 3 * (-32) * Achar - 6 * sp.diff(Achar, s)**2)
    out['char_a_i3'] = {'a': num(a_expr.subs(s, 0)),
                        'samples': [num(a_expr.subs(s, sp.nsimplify(x))) for x in (-1, 0, 0.7)]}

    # Structural operator on g for generic I1 (kappa, lambda, mu, nu).
    Aq = xi  # A(s) = s for I1
    Bq = eta
    par = at(GENERIC)
    g = metric('I1', par)
    op = ((sp.diff(Aq, xi, 2) - sp.diff(Bq, eta, 2)) * g + 3 * sp.diff(Aq, xi) * sp.diff(g, xi)
          - 3 * sp.diff(Bq, eta) * sp.diff(g, eta) + 2 * Aq * sp.diff(g, xi, 2) - 2 * Bq * sp.diff(g, eta, 2))
    out['structural_i1'] = {'point': [1.2, 0.4], 'value': num(sp.simplify(op), point(1.2, 0.4))}

    # {H, A} for generic I1 at a fixed point.
    Hp, Ap = H.subs(par), A.subs(par)
    out['bracket_ha_i1'] = {'point': [1.2, 0.4, 0.7, -1.1],
                            'value': num(PB(Hp, Ap), point(1.2, 0.4, 0.7, -1.1))}

    # {H, p_xi + p_eta} for generic I1: not a conserved quantity.
    out['linear_plus_i1'] = {'point': [1.2, 0.4, 0.7, -1.1],
                             'value': num(PB(Hp, pxi + peta), point(1.2, 0.4, 0.7, -1.1))}

    # Curvature of generic I1 at two points.
    K1 = curvature(g)
    out['curvature_i1'] = {'points': [[0.5, 1.3], [1.6, 0.7]],
                           'values': [num(K1, point(0.5, 1.3)), num(K1, point(1.6, 0.7))]}

    # Curvature of g = kappa xi eta + 1 (II1 with kappa = 1, nu = 1).
    gt = metric('II1', at((1, 0, 0, 1, 0, 0, 0, 0)))
    out['curvature_tampered_ii1'] = {'point': [0.8, 1.5], 'value': num(curvature(gt), point(0.8, 1.5))}

    # Curvature of I1 with mu = 1 only: g = 1 / (xi - eta)^2.
    gc = metric('I1', at((0, 0, 1, 0, 0, 0, 0, 0)))
    out['curvature_const_i1'] = {'point': [1.3, 0.4], 'value': num(curvature(gc), point(1.3, 0.4))}

    # C^2 as a cubic in (H, A, B): coefficients, plus a check that the
    # combination really equals C^2 at random points.
    cas = {}
    for name in systems:
        (Hc, Ac, Bc), _ = systems[name]
        Hp, Ap, Bp = Hc.subs(par), Ac.subs(par), Bc.subs(par)
        poly, gens = casimir_polynomial(name, par)
        coeffs = {}
        for powers, coef in poly.terms():
            coeffs['%d%d%d' % powers] = float(coef)
        lo1, hi1, lo2, hi2 = DOMAIN[name]
        worst = 0.0
        C = PB(Ap, Bp)
        checked = 0
        while checked < 2:
            x, y = random.uniform(lo1, hi1), random.uniform(lo2, hi2)
            if abs(x - y) < 0.2 or abs(x + y) < 0.2:
                continue
            pt = point(round(x, 3), round(y, 3), round(random.uniform(-2, 2), 3), round(random.uniform(-2, 2), 3))
            hv, av, bv, cv = (sp.N(e.subs(pt), 40) for e in (Hp, Ap, Bp, C))
            lhs = cv**2
            rhs = poly.as_expr().subs({gens[0]: hv, gens[1]: av, gens[2]: bv})
            worst = max(worst, float(abs(lhs - rhs) / (1 + abs(lhs))))
            checked += 1
        cas[name] = {'coefficients': coeffs, 'identity_residual': worst}
    out['casimir_cubic'] = {'params': list(GENERIC), 'classes': cas}

    path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(os.path.abspath(__file__)), 'pins.json')
    with open(path, 'w') as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write('\n')
    print('wrote', path)


if __name__ == '__main__':
    main()
