"""Taylor coefficients (about z = 0) of the Riemann-Siegel remainder
functions C0..C3 on z in [-1, 1], z = 2*frac(sqrt(t/(2*pi))) - 1.

Generated from the power series of
    F(z) = cos(pi*(z**2/2 + 3/8)) / cos(pi*z)
(entire; the apparent poles at half-integers are removable) via
    C0 = F
    C1 = -F'''/(12 pi^2)
    C2 = F^(6)/(288 pi^4) + F''/(16 pi^2)
    C3 = -F^(9)/(10368 pi^6) - F^(5)/(120 pi^4) - F'/(32 pi^2)
computed at 50-digit working precision and truncated below 1e-18.
"""

C0 = (
    0.3826834323650898, 0.0, 0.43724046807752043, 0.0,
    0.1323765754803435, 0.0, -0.013605026047674188, 0.0,
    -0.013567621970103581, 0.0, -0.0016237253231444653, 0.0,
    0.0002970535373337969, 0.0, 7.94330087952147e-05, 0.0,
    4.6556124614504504e-07, 0.0, -1.4327251630955106e-06, 0.0,
    -1.0354847112312946e-07, 0.0, 1.2357927083861738e-08, 0.0,
    1.7881083857954906e-09, 0.0, -3.391414389927036e-11, 0.0,
    -1.6326633902565907e-11, 0.0, -3.7851093185412205e-13, 0.0,
    9.327423259201725e-14, 0.0, 5.221843015978137e-15, 0.0,
    -3.350673072744264e-16, 0.0, -3.4124265228117265e-17, 0.0,
    5.751203341432399e-19, 0.0, 1.4895301363211506e-19,
)

C1 = (
    0.0, -0.026825102628375348, 0.0, 0.013784773426351853,
    0.0, 0.03849125048223508, 0.0, 0.009871066299062077,
    0.0, -0.0033107597608584044, 0.0, -0.0014647808577954152,
    0.0, -1.3207940624876963e-05, 0.0, 5.9227487018471416e-05,
    0.0, 5.980242585373449e-06, 0.0, -9.641322456169826e-07,
    0.0, -1.8334733722714413e-07, 0.0, 4.4670875627178334e-09,
    0.0, 2.7096350821772744e-09, 0.0, 7.785288654315851e-11,
    0.0, -2.343762601089369e-11, 0.0, -1.5830172789987521e-12,
    0.0, 1.211994157372379e-13, 0.0, 1.4583781161108306e-14,
    0.0, -2.878630525813192e-16, 0.0, -8.662862902123724e-17,
    0.0, -8.430722727137041e-19, 0.0, 3.6308072230973464e-19,
)

C2 = (
    0.005188542830293168, 0.0, 0.00030946583880634744, 0.0,
    -0.011335941078229373, 0.0, 0.0022330457419581446, 0.0,
    0.00519663740886233, 0.0, 0.0003439914407620834, 0.0,
    -0.0005910648427470583, 0.0, -0.00010229972547935857, 0.0,
    2.0888392216992754e-05, 0.0, 5.927665493096536e-06, 0.0,
    -1.6423838362436276e-07, 0.0, -1.5161199700940684e-07, 0.0,
    -5.907803698206668e-09, 0.0, 2.0911514859478188e-09, 0.0,
    1.781564958329235e-10, 0.0, -1.6164072455353832e-11, 0.0,
    -2.3806962496667617e-12, 0.0, 5.398265295542595e-14, 0.0,
    1.9750142196969516e-14, 0.0, 2.3332868732882633e-16, 0.0,
    -1.118751761004808e-16, 0.0, -4.164009488883767e-18, 0.0,
    4.446081109291883e-19,
)

C3 = (
    0.0, -0.0013397160907194568, 0.0, 0.003744215136379394,
    0.0, -0.0013303178919321468, 0.0, -0.0022654660765471786,
    0.0, 0.0009548499998506731, 0.0, 0.0006010038458963604,
    0.0, -0.00010128858286776622, 0.0, -6.865733449299826e-05,
    0.0, 5.985366791538599e-07, 0.0, 3.331659851239947e-06,
    0.0, 2.1919289102435082e-07, 0.0, -7.890884245681494e-08,
    0.0, -9.414685081295262e-09, 0.0, 9.57011621088348e-10,
    0.0, 1.8763137453470662e-10, 0.0, -4.4378376793233995e-12,
    0.0, -2.242673850561735e-12, 0.0, -3.6276868657352434e-14,
    0.0, 1.7639809550821582e-14, 0.0, 7.960765246786778e-16,
    0.0, -9.419651490589691e-17, 0.0, -7.133103854569658e-18,
    0.0, 3.2899105845546245e-19,
)

TABLES = (C0, C1, C2, C3)

