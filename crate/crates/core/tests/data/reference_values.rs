// Frozen scipy reference values, generated by reference_values.py.
#![allow(clippy::approx_constant)]

#[rustfmt::skip]
pub const SHAPIRO: &[(&[f64], f64, f64)] = &[
    (&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0, 21.0, 22.0, 23.0, 24.0, 25.0, 26.0, 27.0, 28.0, 29.0, 30.0, 31.0, 32.0, 33.0, 34.0, 35.0, 36.0, 37.0, 38.0, 39.0, 40.0, 41.0, 42.0, 43.0, 44.0, 45.0, 46.0, 47.0, 48.0, 49.0, 50.0], 0.9555826875589973, 0.058091862177350316),
    (&[-0.2112, -0.5177, 0.1496, -1.7899, 0.2845, -0.3217, -0.7261, 0.0985, -1.9515, -0.1584, -0.7313, 0.4097, 0.4424, -0.9279, -0.9332, -1.47, -0.7877, 0.3194, 0.8573, 0.2288, 0.0348, -0.8674, 0.1958, -0.8157, 0.2396, -0.2026, 0.856, 0.2025, 1.3688, -0.4082, 0.7559, 0.2252, 1.6966, -1.9621, 0.8743, -1.0237, -0.8686, -0.0184, -1.5106, -1.1946, -0.5055, -0.3225, -1.9037, -0.8736, -0.1459, -0.1319, -0.6623, -0.0041, -0.5134, 1.1735], 0.9835130239549867, 0.7062859978237557),
    (&[2.1, 3.4, 1.9], 0.8479899497487435, 0.23508923424205008),
    (&[1.0, 2.0, 4.0, 8.0], 0.9202026788806026, 0.5380837777759025),
    (&[0.3, 0.1, 0.9, 0.5, 0.4], 0.9556271474166738, 0.7772534037372361),
    (&[8.3817, 10.1182, 9.0208, 11.7091, 8.0569, 11.7532], 0.8790664343048679, 0.26479731341160884),
    (&[5.0467, 1.5384, 0.2493, 0.8806, 0.1448, 1.2269, 0.2984, 0.8217], 0.6983122276494376, 0.002155586631238972),
    (&[0.8756, 0.7843, 0.3328, 0.9134, 0.9397, -1.1092, 2.1853, -0.0489, -0.6059, 0.6001, -0.4886], 0.9542985104708109, 0.6991589143937165),
    (&[0.6272, -1.2014, 0.7254, -1.2639, 0.3757, -0.2132, -0.5015, 0.1531, -0.5753, -0.7719, 0.3949, 1.9312], 0.9525056672892118, 0.6738557443592521),
    (&[0.5619, 0.2257, 0.2451, 0.8116, 0.645, 0.4105, 0.6969, 0.5629, 0.1094, 0.868, 0.5155, 0.3434, 0.4909, 0.3947, 0.5628], 0.9816705035311528, 0.9796237959520762),
    (&[0.2344, 1.3317, 0.2816, 2.9972, 1.1585, 2.2503, 1.1767, 3.4499, 0.6336, 1.0513, 4.0557, 0.2841, 1.2123, 2.6518, 0.3452, 0.4967, 0.2865, 3.2568, 0.8275, 0.7297], 0.85134829775574, 0.005615371522053674),
    (&[0.7624, 1.8086, 7.7796, 4.4316, 3.7973, 7.3757, 2.2824, 9.8401, 3.8954, 3.4609, 4.2045, 5.112, 7.1035, 2.9035, 2.5279, 5.1145, 6.0168, 7.6318, 3.5697, 7.901, 1.9403, 9.1573, 1.7238, 4.7412, 5.5859], 0.9626744016013884, 0.4702718249528309),
    (&[0.6575, 3.3287, -0.2105, -0.7547, 0.9178, 0.3125, -2.0305, 1.0121, 1.102, -0.5176, 1.0861, 1.2121, 2.9167, -3.0298, -0.8777, 0.8792, 0.6645, 0.6747, -1.3488, 0.0476, 0.8446, 0.9934, 0.6932, 3.3005, 1.0549, -0.883, 0.786, -2.7063, 0.5766, -0.029], 0.9291197282143786, 0.04653179648729641),
    (&[1.8739, 0.347, 1.91, 0.0126, 4.0459, 1.7902, 0.3006, 0.5218, 1.2929, 0.1861, 0.4666, 4.7934, 0.4314, 0.1957, 0.0281, 0.5983, 3.3772, 0.0141, 4.6051, 0.3962, 3.4397, 5.1212, 3.2997, 0.0677, 0.1183, 1.3827, 1.3681, 0.7317, 0.0481, 0.3575, 0.9068, 1.0463, 0.2677, 1.018, 1.246, 1.9205, 0.3363, 0.9461, 0.8906, 4.1512], 0.809404559591522, 1.0702908523598413e-05),
    (&[0.8732, 0.5613, -0.5458, 0.8098, -1.9486, -0.393, 0.4827, 1.4741, -1.6445, -1.2079, -0.4991, -1.5713, -0.0475, 0.2596, -0.269, -0.8838, 1.8752, 1.5751, 0.3047, 1.4665, -0.7931, -1.33, 0.2526, 1.8032, -0.2284, 0.754, 1.2588, 0.0445, 0.841, -0.6608, 1.2901, 0.4211, 0.0675, -0.6298, -2.8555, 0.3189, 0.003, -0.1162, -0.3973, 1.8846, -0.0867, -0.0816, -0.0034, -1.0721, -0.5364, -0.3443, 0.3168, 0.5983, -0.7553, 1.0568, -2.3901, 1.5139, 0.6583, 0.8263, 0.1393, 0.4136, 0.3313, -0.3473, -0.9087, 0.4187, 0.2696, -0.6726, 0.0587, -0.7266, 2.3947, 0.547, 0.6458, 0.9126, -3.5085, 0.0325, 1.1215, -1.1096, 0.3642, 0.6039, -1.2374], 0.9749168718839213, 0.1421282202722713),
    (&[0.7346, 0.2665, -0.4943, -0.7439, 0.7056, 0.1907, -0.806, 0.6803, 0.0901, 0.2995, -0.2704, -0.8449, -0.9447, 0.0093, -0.4541, 0.1158, -0.3605, 0.9707, 0.7906, -0.5967, -0.4532, -0.7973, -0.2876, 0.5568, 0.7208, -0.2913, -0.185, -0.1801, -0.6034, -0.785, -0.7884, 0.2345, -0.6481, -0.9351, 0.2696, 0.8879, 0.9997, -0.2662, 0.8693, -0.0673, 0.3436, 0.2975, -0.0212, -0.0196, 0.4392, -0.2454, -0.6014, -0.9964, -0.826, -0.7358, 0.9607, 0.223, 0.4184, -0.8579, -0.9249, 0.8113, 0.5476, 0.0687, -0.3275, -0.7518, -0.7988, 0.6355, 0.7322, 0.2661, 0.9799, -0.2508, -0.6167, 0.7249, -0.4913, 0.5092, -0.3165, -0.2715, 0.4213, 0.0899, -0.567, 0.8933, -0.7503, 0.3807, 0.1405, -0.766, 0.2375, -0.1897, 0.9174, -0.9695, 0.6686, 0.0811, 0.7854, -0.8438, 0.3131, -0.0397, -0.3365, -0.3821, 0.2843, 0.1211, -0.5887, 0.1627, -0.2188, -0.5016, -0.2888, -0.2832], 0.9512003396455174, 0.000996088009433796),
    (&[2.1461, 0.0367, 0.7529, 0.8224, 0.615, 0.3544, 1.9822, 1.2604, 3.2875, 3.9412, 0.4994, 0.8689, 2.6824, 1.4478, 2.5355, 4.596, 0.2475, 1.3712, 1.0931, 2.8206, 2.4759, 1.2696, 2.5962, 1.0526, 1.5214, 0.8406, 2.7319, 0.0322, 0.4729, 0.3169, 1.1638, 0.8636, 0.2871, 10.512, 0.8256, 6.9172, 1.8371, 9.4249, 2.0447, 2.7971, 1.045, 3.6368, 3.2894, 0.6657, 0.1928, 7.9014, 5.0385, 3.6876, 5.097, 0.9122, 2.1562, 2.6434, 1.6825, 1.6338, 3.0516, 1.0347, 1.5356, 1.7293, 1.1131, 0.4197, 4.0866, 3.8061, 0.2084, 0.6148, 3.3042, 1.9772, 2.1441, 1.3909, 0.2931, 2.8813, 1.8646, 1.8739, 0.9911, 0.8736, 1.5925, 1.476, 2.445, 2.3213, 2.6258, 4.4418, 3.0829, 0.0976, 0.3098, 1.8289, 5.1421, 0.1753, 0.3847, 0.7711, 5.2451, 3.3225, 1.5637, 4.9768, 0.7662, 0.9113, 2.8615, 1.1201, 1.756, 0.5905, 1.1096, 0.4722, 1.4583, 3.0923, 0.388, 1.5804, 8.3011, 6.666, 0.1198, 0.7995, 0.6637, 2.7091, 3.5766, 1.6932, 2.555, 0.0141, 0.1592, 0.2226, 3.5779, 0.6536, 0.1647, 3.6985, 1.4402, 1.3232, 5.3875, 2.5132, 4.1811, 1.6082, 0.3393, 0.4525, 1.208, 0.3153, 0.5422, 0.0059, 2.5943, 0.2403, 0.297, 1.8773, 3.4482, 1.4081, 2.1113, 0.0452, 0.6053, 2.6013, 0.1639, 1.4207, 0.7922, 1.5294, 2.3343, 3.0703, 1.4058, 0.6047], 0.8288493170419475, 5.936224585821375e-12),
    (&[-0.9465, -0.5841, -0.9466, -0.8361, -0.6741, -0.1351, 1.7654, 1.6163, 0.3533, 0.4065, 0.6599, -0.0539, -0.307, 1.412, -1.3986, 1.192, -0.9011, -1.6912, 0.6968, -0.8383, -2.5705, 0.3958, 0.3839, -0.1022, 0.792, -1.1156, 0.0877, 1.3158, 0.1263, -0.1106, -0.7284, -0.168, 0.2192, -0.7793, -0.4542, -0.4944, -0.0429, 0.591, 0.151, 0.8235, -0.2052, 0.5793, -0.0915, -0.889, -1.1622, -1.6968, 1.7389, -1.5128, -1.2888, -1.3256, 0.2912, 0.8103, 0.0576, 1.6353, 0.0747, 0.2029, 0.2035, -0.4579, -0.0799, 0.7866, -0.8014, -0.1808, 0.2185, 0.173, -0.1096, -1.2202, 0.7093, -0.2081, 3.3592, -1.6037, 1.4485, 1.1235, 0.9753, -0.6028, -0.3535, -0.0698, -0.5621, -0.2555, -0.8015, -0.786, 1.1555, -2.4288, 0.4476, 0.4831, 2.3915, -1.0426, -0.958, 1.4773, 0.3892, -1.0682, 0.7647, -0.4416, 0.7836, -1.0106, 0.621, 2.0112, -0.7182, -0.4081, -2.0848, 2.3699, 0.1343, 0.9085, -1.0929, 1.1085, -1.4831, -0.8722, -0.2971, 3.564, -1.3008, 1.5232, -0.8121, 0.2159, -0.585, -0.8592, 2.6654, 0.3522, 1.397, 1.8069, 0.4704, -0.903, 0.7783, -0.9247, -0.0796, 2.1326, 1.8004, -0.3762, -0.9162, -1.0723, 1.2942, 0.1215, 0.9754, 0.5455, 0.4261, -0.5343, 1.9876, -0.9475, 1.5766, 0.2354, 0.9614, 0.4284, -0.9571, 0.7207, 0.007, -0.4622, 0.0639, 0.1216, -0.3219, -0.8882, -0.4892, 1.2539, -1.6384, -0.013, 0.2115, 0.3192, -0.4026, -1.0607, -0.3743, 0.1617, -1.2773, 0.9446, -0.1471, -1.2377, -1.0003, 0.4112, 1.0185, 0.1997, -0.2566, -0.584, -0.628, -0.9404, -0.1226, 1.1109, 0.0533, -0.4545, -0.4592, 0.6133, 0.4287, 1.6116, 1.5137, -0.5523, 0.6288], 0.9837679067891362, 0.033909758042847286),
    (&[0.1534, 0.1179, 0.3645, 0.5163, 0.1945, 0.4695, 0.5077, 0.3514, 0.1427, 0.2466, 0.3737, 0.2112, 0.5158, 0.1683, 0.0885, 0.209, 0.0914, 0.1855, 0.1678, 0.1767, 0.4204, 0.2966, 0.0483, 0.4226, 0.3062, 0.0246, 0.4867, 0.0572, 0.4489, 0.2399, 0.6477, 0.1748, 0.4492, 0.3027, 0.2668, 0.335, 0.0413, 0.5411, 0.0199, 0.3255, 0.1214, 0.056, 0.7607, 0.1775, 0.2223, 0.1043, 0.1614, 0.3477, 0.1752, 0.8503, 0.4926, 0.4416, 0.1106, 0.2621, 0.6492, 0.4804, 0.5355, 0.2295, 0.4405, 0.1284, 0.1086, 0.1976, 0.1142, 0.4205, 0.1663, 0.3073, 0.2041, 0.1362, 0.1287, 0.5019, 0.1285, 0.5299, 0.2802, 0.2712, 0.2717, 0.1588, 0.4308, 0.1241, 0.4495, 0.3809, 0.3637, 0.0498, 0.1416, 0.2059, 0.1533, 0.3897, 0.0588, 0.1943, 0.1109, 0.358, 0.3819, 0.3224, 0.2871, 0.1035, 0.1143, 0.2139, 0.1488, 0.4348, 0.1575, 0.5886, 0.2421, 0.1594, 0.2105, 0.3993, 0.0671, 0.1649, 0.4861, 0.2059, 0.3506, 0.4032, 0.1921, 0.795, 0.0884, 0.3497, 0.1753, 0.2585, 0.4986, 0.1781, 0.1215, 0.1213, 0.7365, 0.3952, 0.1086, 0.3032, 0.5116, 0.2101, 0.5356, 0.2311, 0.3458, 0.0746, 0.3288, 0.0303, 0.4455, 0.2913, 0.3851, 0.5306, 0.3323, 0.6427, 0.2152, 0.1757, 0.4159, 0.2403, 0.2667, 0.2265, 0.6844, 0.032, 0.127, 0.0518, 0.1892, 0.1879, 0.1023, 0.3888, 0.4242, 0.2896, 0.3173, 0.0906, 0.3751, 0.3077, 0.495, 0.1442, 0.119, 0.6694, 0.4269, 0.2783, 0.1768, 0.3304, 0.0746, 0.1763, 0.0766, 0.4883, 0.1349, 0.1247, 0.1918, 0.3948, 0.2415, 0.1541, 0.2269, 0.3151, 0.3161, 0.3846, 0.4223, 0.3136, 0.5972, 0.4713, 0.1839, 0.0032, 0.3138, 0.0907, 0.2823, 0.4907, 0.3349, 0.0958, 0.4765, 0.4017, 0.4567, 0.2078, 0.0373, 0.2721, 0.0681, 0.3578, 0.1536, 0.2438, 0.2276, 0.3305, 0.0637, 0.2341, 0.231, 0.1777, 0.4626, 0.1239, 0.2372, 0.5822, 0.0774, 0.2524, 0.0844, 0.1346, 0.3441, 0.3897, 0.2925, 0.4182, 0.276, 0.6961, 0.1728, 0.6277, 0.3736, 0.3547, 0.1038, 0.2972, 0.386, 0.8671, 0.4078, 0.7153, 0.6439, 0.2442, 0.283, 0.334, 0.2603, 0.1031, 0.4903, 0.427, 0.0873, 0.5641, 0.2198, 0.3073, 0.115, 0.5107, 0.2388, 0.1267, 0.2476, 0.1697], 0.9522114159013864, 2.525194060890965e-07),
    (&[-0.67, -0.1829, -0.6152, -1.9356, -0.8471, -2.3679, 0.0485, 1.3264, -1.2208, 0.9042, 0.1856, 0.081, 2.8522, -1.412, -0.151, 0.7075, 2.6238, -0.0627, -0.2761, 0.2179, -0.3204, -0.0487, 0.287, 0.136, 0.0191, -1.9674, -0.6593, 1.303, 0.1273, -0.5824, 6.2256, 6.8678, 6.1109, 7.2996, 6.1658, 6.3068, 5.4387, 5.9702, 6.0795, 5.3078, 6.1946, 6.7146, 4.5067, 2.7007, 3.6526, 6.587, 5.6665, 5.7777, 4.0978, 7.4763, 5.3165, 3.5558, 6.8347, 6.271, 5.1734, 5.1227, 5.2418, 4.3035, 7.5428, 5.4117], 0.8897697569653771, 5.689426965265213e-05),
];

#[rustfmt::skip]
pub const CHI_TAIL: &[(f64, u32, f64)] = &[
    (0.5, 1, 0.47950012218695337),
    (3.841458820694124, 1, 0.04999999999999989),
    (40.0, 1, 2.5396285894708634e-10),
    (1.0, 2, 0.6065306597126334),
    (7.5, 3, 0.0575584519726364),
    (12.0, 4, 0.01735126523666451),
    (0.01, 6, 0.9999999792446357),
    (25.0, 9, 0.002971180485917624),
    (60.0, 30, 0.0009206823961486636),
    (3.2, 2, 0.2018965179946554),
    (100.0, 50, 3.454931382984871e-05),
    (15.5, 12, 0.2152245030398671),
];

#[rustfmt::skip]
pub const TABLES: &[(&[&[u64]], f64, f64)] = &[
    (&[&[12, 5], &[7, 9]], 2.4305755196815575, 0.118989205532145),
    (&[&[20, 15, 8], &[10, 25, 30]], 14.698615949533945, 0.0006430372043873685),
    (&[&[3, 8, 2], &[6, 1, 9], &[4, 4, 4]], 10.736554898093358, 0.02968989780757001),
];
