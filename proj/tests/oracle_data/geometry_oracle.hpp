// Generated by tools/oracles/gen_geometry_oracle.py; do not edit.
// Test metric (3d torus, coordinates x1,x2,x3, all periods 2*pi):
//   g11 = 1 + 0.3 sin(x1) cos(x2)   g12 = 0.1 sin(x1+x2+x3)
//   g22 = 1 + 0.25 cos(x2) sin(x3)  g13 = 0.05 cos(x1-x3)
//   g33 = 1 + 0.2 sin(x1+x3)        g23 = 0.08 sin(x2) cos(x3)
// Probe fields: omega_a = (sin x2, cos x3, sin x1);
//   t^a_b rows ((cos x2, 0.2 sin x3, 0), (0, sin(x1+x2), 0.1 cos x1),
//              (0.3 sin x3, 0, cos x1 cos x2)); v^a = omega components;
//   B = sym with diag (sin x2, cos x1, sin x3), B12 = 0.1 cos x3,
//   B23 = 0.2 sin(x1+x2), B13 = 0.
// 2d conformal metric: h = e^{2f} delta, f = 0.3 sin(y1) cos(y2).
#pragma once

namespace oracle3d_p1 {
inline constexpr double pt[3] = {0.7853981633974483, 1.3089969389957472, 1.832595714594046};
inline constexpr double g[9] = {1.0549038105676658, -0.07071067811865475, 0.02500000000000001, -0.07071067811865475, 1.0625, -0.01999999999999999, 0.02500000000000001, -0.01999999999999999, 1.1};
inline constexpr double gamma[27] = {0.027264679063553017, -0.09832718859018498, -0.000452067229024429, -0.09832718859018498, -0.07477452051521082, -0.034209395021477934, -0.000452067229024429, -0.034209395021477934, 0.0383238924924862, 0.03242901295480553, -0.005898737557668913, -0.03479938401811613, -0.005898737557668913, -0.11469821837498706, -0.01014637331647751, -0.03479938401811613, -0.01014637331647751, -0.06922192087252219, 0.03933475770157201, 0.03426867638448056, -0.07935202398007324, 0.03426867638448056, 0.002354388236573325, 0.0005930067356430895, -0.07935202398007324, 0.0005930067356430895, -0.08085916009836948};
inline constexpr double riemann[81] = {0.0, -5.9631119486702744e-18, 8.673617379884035e-19, 5.9631119486702744e-18, 0.0, 9.75781955236954e-19, -8.673617379884035e-19, -9.75781955236954e-19, 0.0, 0.0, 0.1150393891459896, 0.03383162996280169, -0.1150393891459896, 0.0, -0.03502982431426413, -0.03383162996280169, 0.03502982431426413, 0.0, 0.0, 0.03383162996280169, 0.08774886006896804, -0.03383162996280169, 0.0, -0.02826280765519074, -0.08774886006896804, 0.02826280765519074, 0.0, 0.0, -0.11503938914598957, -0.03383162996280169, 0.11503938914598957, 0.0, 0.03502982431426412, 0.03383162996280169, -0.03502982431426412, 0.0, 0.0, -3.0357660829594124e-18, -1.0842021724855044e-19, 3.0357660829594124e-18, 0.0, 1.1926223897340549e-18, 1.0842021724855044e-19, -1.1926223897340549e-18, 0.0, 0.0, -0.035029824314264116, -0.028262807655190743, 0.035029824314264116, 0.0, 0.007424980674918171, 0.028262807655190743, -0.007424980674918171, 0.0, 0.0, -0.03383162996280169, -0.08774886006896807, 0.03383162996280169, 0.0, 0.02826280765519074, 0.08774886006896807, -0.02826280765519074, 0.0, 0.0, 0.03502982431426411, 0.028262807655190743, -0.03502982431426411, 0.0, -0.007424980674918175, -0.028262807655190743, 0.007424980674918175, 0.0, 0.0, 4.336808689942018e-19, -1.734723475976807e-18, -4.336808689942018e-19, 0.0, -4.336808689942018e-19, 1.734723475976807e-18, 4.336808689942018e-19, 0.0};
inline constexpr double ricci[9] = {0.18969316679948772, -0.03282232363362806, 0.0332394724652294, -0.03282232363362805, 0.11491278683871808, 0.029326180235052426, 0.033239472465229396, 0.02932618023505243, 0.08705474578942843};
inline constexpr double scal = 0.36401386478083025;
inline constexpr double einstein[9] = {-0.002306639728892723, -0.019952490022005658, 0.02868929915546902, -0.01995249002200565, -0.07846957882609798, 0.03296631888286072, 0.028689299155469014, 0.03296631888286073, -0.11315287984002823};
inline constexpr double nabla_omega[9] = {-0.04575628539350001, 0.06921845180991573, 0.7546470555137439, 0.32803749691243644, 0.04087575327162254, 0.029998344415883286, 0.04754027432719621, -0.9359274818731851, 0.0022420714437991693};
inline constexpr double nabla_tmix[27] = {-0.006395803250341977, -0.053298214022791945, -0.0001957878667853936, -0.9746993991450686, -0.042240924229809934, -0.0007339391057017081, 0.017828136009135333, -0.07066317508064263, 0.008048484555783761, -0.032556577391262165, -0.49615835711855366, -0.04174832512328436, -0.00178160360102971, -0.5013060289786536, -0.0012222188554087165, 0.006682470344900498, -0.006764656660816138, 0.05227960031031821, -0.02791332395266986, 0.05949786418028504, -0.18045854152332386, 0.03126265446539764, 0.029896269135474787, -0.6729331000575657, -0.10696128658081885, -0.005011481287489507, -0.011063479348319194};
inline constexpr double div_v = 0.06569899325723667;
inline constexpr double div_B[3] = {-0.08569015219100257, -0.2313215764643308, 0.1947008566674198};
}
namespace oracle3d_p2 {
inline constexpr double pt[3] = {0.2617993877991494, 2.6179938779914944, 1.0471975511965976};
inline constexpr double g[9] = {0.932756839587396, -0.07071067811865475, 0.03535533905932738, -0.07071067811865475, 0.8125, 0.02, 0.03535533905932738, 0.02, 1.1931851652578136};
inline constexpr double gamma[27] = {-0.1416402560170757, -0.022163369830205504, -0.00422388073257795, -0.022163369830205504, -0.08219654493435043, -0.0433382353566976, -0.00422388073257795, -0.0433382353566976, -0.07032640629245268, -0.076328463509983, -0.002675494745958111, -0.04443722030785879, -0.002675494745958111, -0.07426336344315403, -0.0704496790800135, -0.04443722030785879, -0.0704496790800135, -0.049361104522385034, 0.03510741570140919, 0.03033262855012999, 0.022561448495748843, 0.03033262855012999, 0.020011081485842165, 0.0024650252722792833, 0.022561448495748843, 0.0024650252722792833, 0.024602669723647275};
inline constexpr double riemann[81] = {0.0, -4.7704895589362195e-18, 4.336808689942018e-19, 4.7704895589362195e-18, 0.0, -1.0842021724855044e-18, -4.336808689942018e-19, 1.0842021724855044e-18, 0.0, 0.0, 0.023760775054827186, 0.027095859726000513, -0.023760775054827186, 0.0, -0.0331402166210951, -0.027095859726000513, 0.0331402166210951, 0.0, 0.0, 0.027095859726000517, 0.12187654675963255, -0.027095859726000517, 0.0, -0.03503573894912225, -0.12187654675963255, 0.03503573894912225, 0.0, 0.0, -0.02376077505482717, -0.027095859726000517, 0.02376077505482717, 0.0, 0.03314021662109507, 0.027095859726000517, -0.03314021662109507, 0.0, 0.0, -1.1926223897340549e-18, 1.0842021724855044e-19, 1.1926223897340549e-18, 0.0, 1.4094628242311558e-18, -1.0842021724855044e-19, -1.4094628242311558e-18, 0.0, 0.0, -0.03314021662109507, -0.035035738949122236, 0.03314021662109507, 0.0, -0.03652853437437253, 0.035035738949122236, 0.03652853437437253, 0.0, 0.0, -0.027095859726000513, -0.12187654675963251, 0.027095859726000513, 0.0, 0.03503573894912225, 0.12187654675963251, -0.03503573894912225, 0.0, 0.0, 0.03314021662109508, 0.03503573894912225, -0.03314021662109508, 0.0, 0.03652853437437253, -0.03503573894912225, -0.03652853437437253, 0.0, 0.0, 4.336808689942018e-19, -3.903127820947816e-18, -4.336808689942018e-19, 0.0, 1.3010426069826053e-18, 3.903127820947816e-18, -1.3010426069826053e-18, 0.0};
inline constexpr double ricci[9] = {0.13048909200923658, -0.02997365862202401, 0.04177990705346463, -0.02997365862202401, -0.007217832925047896, 0.024095544183333747, 0.04177990705346464, 0.024095544183333747, 0.07976604785682971};
inline constexpr double scal = 0.18938380757391401;
inline constexpr double einstein[9] = {0.0421645710984008, -0.023277929892901866, 0.03843204268890355, -0.023277929892901866, -0.08415500475195047, 0.02220170610759461, 0.038432042688903566, 0.02220170610759461, -0.033218927011787566};
inline constexpr double nabla_omega[9] = {0.09989789195567336, 0.004568770331287704, 0.9844170442534873, -0.8614566334531509, 0.07305070518711783, 0.056255961731230646, 0.01849121796441895, -0.809769442053208, 0.053476115922571774};
inline constexpr double nabla_tmix[27] = {0.012123081281205325, -0.04899974622046092, 0.005431292281252468, -0.5107961945486883, -0.08343434368592752, 0.0029837934729834426, -0.01057458398980465, 0.06272187128541913, 0.0022881730561620656, 0.07092140402119802, -0.9820762109049445, 0.02035405217177535, -0.018223755048089003, -0.9683221576145216, 0.0697546305838174, 0.034981300866635055, -0.007934855489329274, 0.04488561078528125, 0.041624865993532045, 0.045063395437857215, 0.2281711713766842, 0.0055035561733945484, 0.04852789910249808, -0.4697703872703924, 0.15682358945871155, 0.017867390657437515, 0.018509439479133923};
inline constexpr double div_v = 0.12081730509443642;
inline constexpr double div_B[3] = {-0.16605852156668321, -0.312945653948394, -0.1773246774755367};
}
namespace oracle2d_q1 {
inline constexpr double pt[2] = {0.7853981633974483, 1.3089969389957472};
inline constexpr double g[4] = {1.1160633428062154, 0.0, 0.0, 1.1160633428062154};
inline constexpr double riemann[16] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.12255226070989654, -0.12255226070989654, 0.0, 0.0, -0.12255226070989654, 0.12255226070989654, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double ricci[4] = {0.10980762113533153, 0.0, 0.0, 0.10980762113533153};
inline constexpr double scal = 0.19677668269120396;
}
namespace oracle2d_q2 {
inline constexpr double pt[2] = {1.832595714594046, 0.2617993877991494};
inline constexpr double g[4] = {1.7503357403018793, 0.0, 0.0, 1.7503357403018793};
inline constexpr double riemann[16] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.9798512869665446, -0.9798512869665446, 0.0, 0.0, -0.9798512869665446, 0.9798512869665446, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double ricci[4] = {0.5598076211353316, 0.0, 0.0, 0.5598076211353316};
inline constexpr double scal = 0.6396574191403781;
}
